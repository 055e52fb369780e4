#include "entroframe/explorer.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "entroframe/entropy.hpp"
#include "entroframe/parallel.hpp"

namespace entroframe {

namespace {

/// Accumulates S(h/||h||) and its gradient for one frame into `grad`.
double add_frame_gradient(const FrameFamily& f, const Vector& h, double norm2, Vector& grad) {
  const Vector z = f.vectors().adjoint() * h;
  const auto& w = f.measure().weights();
  Vector az(z.size());
  std::vector<double> value_terms(static_cast<std::size_t>(z.size()));
  double ap_sum = 0.0;
  for (Eigen::Index a = 0; a < z.size(); ++a) {
    if (std::abs(z[a]) < kExactZero)
      throw PerturbationRequired("entropy gradient: coefficient " + std::to_string(a) + " vanishes");
    const double p = std::norm(z[a]) / norm2;
    const double lp = std::log(p);
    const double wa = w[static_cast<std::size_t>(a)];
    value_terms[static_cast<std::size_t>(a)] = -wa * p * lp;
    const double coef = -wa * (lp + 1.0);
    az[a] = coef * z[a];
    ap_sum += coef * p;
  }
  grad += (2.0 / norm2) * (f.vectors() * az - ap_sum * h);
  return stable_sum(value_terms);
}

double min_coefficient(const FrameFamily& f, const Vector& h) {
  return (f.vectors().adjoint() * h).cwiseAbs().minCoeff();
}

double objective(const FrameFamily& f, const FrameFamily& g, const Vector& h) {
  return entropy_sum(f, g, h, false).sum;
}

}  // namespace

GradientResult entropy_sum_gradient(const FrameFamily& f, const FrameFamily& g, const Vector& h) {
  if (f.dim() != g.dim()) throw InvalidArgument("entropy_sum_gradient: dimension mismatch");
  if (h.size() != f.dim()) throw InvalidArgument("entropy_sum_gradient: h has the wrong dimension");
  const double norm2 = h.squaredNorm();
  if (!(norm2 > 0.0)) throw InvalidArgument("entropy_sum_gradient: h must be nonzero");
  GradientResult out;
  out.gradient = Vector::Zero(h.size());
  out.value = add_frame_gradient(f, h, norm2, out.gradient) + add_frame_gradient(g, h, norm2, out.gradient);
  return out;
}

Vector tangent_projection(const Vector& h, const Vector& grad) {
  const double along = h.dot(grad).real() / h.squaredNorm();
  return grad - along * h;
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::GradTol: return "grad_tol";
    case StopReason::StepTol: return "step_tol";
    case StopReason::MaxIters: return "max_iters";
  }
  return "max_iters";
}

namespace {

struct RestartOutcome {
  Vector h;
  RestartTrace trace;
};

RestartOutcome run_restart(const FrameFamily& f, const FrameFamily& g, const OptimizerConfig& cfg,
                           int restart, Field field) {
  constexpr double kArmijo = 1e-4;
  constexpr double kNudge = 1e-9;
  RestartOutcome out;
  out.trace.restart = restart;
  out.trace.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(restart));
  Rng rng(out.trace.seed);
  Vector h = random_unit_vector(rng, f.dim(), field);
  out.trace.start_value = objective(f, g, h);

  double step = 1.0;
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    if (std::min(min_coefficient(f, h), min_coefficient(g, h)) < cfg.barrier_eps) {
      h += kNudge * random_unit_vector(rng, f.dim(), field);
      h /= h.norm();
      ++out.trace.nudges;
      continue;
    }
    GradientResult gr;
    try {
      gr = entropy_sum_gradient(f, g, h);
    } catch (const PerturbationRequired&) {
      h += kNudge * random_unit_vector(rng, f.dim(), field);
      h /= h.norm();
      ++out.trace.nudges;
      continue;
    }
    const Vector d = tangent_projection(h, gr.gradient);
    const double dn2 = d.squaredNorm();
    if (std::sqrt(dn2) < cfg.grad_tol) {
      out.trace.stop = StopReason::GradTol;
      break;
    }
    double t = std::min(step * 2.0, 1e6);
    Vector next;
    double next_value = 0.0;
    bool accepted = false;
    while (t * std::sqrt(dn2) >= cfg.step_tol) {
      next = h - t * d;
      next /= next.norm();
      next_value = objective(f, g, next);
      if (next_value <= gr.value - kArmijo * t * dn2) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      out.trace.stop = StopReason::StepTol;
      break;
    }
    step = t;
    const double moved = (next - h).norm();
    h = std::move(next);
    if (moved < cfg.step_tol) {
      out.trace.stop = StopReason::StepTol;
      ++it;
      break;
    }
  }
  out.trace.iterations = it;
  out.trace.final_value = objective(f, g, h);
  out.h = std::move(h);
  return out;
}

}  // namespace

MinimizeResult minimize_entropy_sum(const FrameFamily& f, const FrameFamily& g, const OptimizerConfig& cfg) {
  cfg.validate();
  if (f.dim() != g.dim()) throw InvalidArgument("minimize_entropy_sum: dimension mismatch");
  const Field field = sampling_field(f, g);
  const auto n = static_cast<std::size_t>(cfg.restarts);
  std::vector<RestartOutcome> runs(n);
  parallel_for(n, [&](std::size_t r) { runs[r] = run_restart(f, g, cfg, static_cast<int>(r), field); });

  MinimizeResult out;
  std::size_t best = 0;
  for (std::size_t r = 1; r < n; ++r)
    if (runs[r].trace.final_value < runs[best].trace.final_value) best = r;
  out.argmin = runs[best].h;
  out.min_value = runs[best].trace.final_value;
  out.best_restart = static_cast<int>(best);
  out.trace.reserve(n);
  for (auto& r : runs) out.trace.push_back(r.trace);
  return out;
}

std::string to_string(ProbeVerdict v) {
  switch (v) {
    case ProbeVerdict::SupportsConjecture: return "supports-conjecture";
    case ProbeVerdict::ViolationCandidate: return "VIOLATION-CANDIDATE";
    case ProbeVerdict::HypothesisNotMet: return "hypothesis-not-met";
  }
  return "hypothesis-not-met";
}

ProbeReport probe_kraus(const FrameFamily& f, const FrameFamily& g, const OptimizerConfig& cfg) {
  cfg.validate();
  if (f.dim() != g.dim()) throw InvalidArgument("probe_kraus: dimension mismatch");
  ProbeReport r;
  r.config = cfg;
  r.config_hash = cfg.hash();
  r.frame_a = summarize(f);
  r.frame_b = summarize(g);

  for (const auto* fr : {&f, &g}) {
    const char* name = fr == &f ? "frame A" : "frame B";
    if (!is_one_bounded(*fr)) r.hypothesis_issues.push_back(std::string(name) + " is not 1-bounded");
    if (parseval_defect(*fr) > kParsevalGate)
      r.hypothesis_issues.push_back(std::string(name) + " is not Parseval within tolerance");
  }

  const MinimizeResult m = minimize_entropy_sum(f, g, cfg);
  r.trace = m.trace;
  r.argmin = m.argmin;
  r.min_entropy_sum_found = m.min_value;
  const EntropyPair at_min = entropy_sum(f, g, m.argmin);
  r.argmin_in_domain = at_min.in_domain;
  r.tolerance = kDefaultVerifyTol + at_min.first.quadrature_error_hint.value_or(0.0) +
                at_min.second.quadrature_error_hint.value_or(0.0);

  r.coherence = coherence(f, g);
  r.coherence_extrapolated = coherence_extrapolated(f, g);
  r.upper_bound = deutsch_upper(f, g);

  if (!r.hypothesis_issues.empty() && r.coherence > 1.0 + kOneBoundedSlack) {
    r.verdict = ProbeVerdict::HypothesisNotMet;
    return r;
  }

  r.kraus_bound = kraus_lower(r.coherence);
  r.deutsch_bound = deutsch_lower(r.coherence);
  if (!r.kraus_bound.infinite) r.margin_kraus = r.min_entropy_sum_found - r.kraus_bound.value;
  r.margin_deutsch = r.min_entropy_sum_found - r.deutsch_bound;
  r.deutsch_floor_breach = r.margin_deutsch < -r.tolerance;

  if (!r.hypothesis_issues.empty()) {
    r.verdict = ProbeVerdict::HypothesisNotMet;
    return r;
  }

  const bool candidate = r.kraus_bound.infinite || r.min_entropy_sum_found + kKrausMargin < r.kraus_bound.value;
  if (!candidate) {
    r.verdict = ProbeVerdict::SupportsConjecture;
    return r;
  }

  // Re-evaluate on a refined grid (when available) with extended-precision accumulation.
  Reevaluation& re = r.reevaluation;
  re.performed = true;
  const bool refinable = f.refinable() && g.refinable();
  re.refinement_factor = refinable ? 4 : 1;
  const FrameFamily rf = refinable ? refine_frame(f, 4) : f;
  const FrameFamily rg = refinable ? refine_frame(g, 4) : g;
  re.entropy_sum = static_cast<double>(shannon_entropy_extended(rf, m.argmin) + shannon_entropy_extended(rg, m.argmin));
  re.coherence = coherence(rf, rg);
  re.kraus_bound = kraus_lower(re.coherence);
  re.confirmed = re.kraus_bound.infinite || re.entropy_sum + kKrausMargin < re.kraus_bound.value;
  r.verdict = re.confirmed ? ProbeVerdict::ViolationCandidate : ProbeVerdict::SupportsConjecture;
  return r;
}

void to_json(nlohmann::json& j, const RestartTrace& t) {
  j = nlohmann::json{{"restart", t.restart},         {"seed", t.seed},
                     {"start_value", t.start_value}, {"final_value", t.final_value},
                     {"iterations", t.iterations},   {"nudges", t.nudges},
                     {"stop", to_string(t.stop)}};
}

void to_json(nlohmann::json& j, const ProbeReport& r) {
  nlohmann::json argmin = nlohmann::json::array();
  for (const auto& z : r.argmin) argmin.push_back(nlohmann::json::array({z.real(), z.imag()}));
  nlohmann::json minima = nlohmann::json::array();
  for (const auto& t : r.trace) minima.push_back(t.final_value);
  j = nlohmann::json{
      {"min_entropy_sum_found", r.min_entropy_sum_found},
      {"argmin", std::move(argmin)},
      {"argmin_in_domain", r.argmin_in_domain},
      {"coherence", r.coherence},
      {"coherence_extrapolated",
       r.coherence_extrapolated ? nlohmann::json(*r.coherence_extrapolated) : nlohmann::json(nullptr)},
      {"kraus_bound", r.kraus_bound},
      {"deutsch_bound", r.deutsch_bound},
      {"upper_bound", r.upper_bound},
      {"margin_kraus", r.margin_kraus ? nlohmann::json(*r.margin_kraus) : nlohmann::json(nullptr)},
      {"margin_deutsch", r.margin_deutsch},
      {"tolerance", r.tolerance},
      {"deutsch_floor_breach", r.deutsch_floor_breach},
      {"verdict", to_string(r.verdict)},
      {"hypothesis_issues", r.hypothesis_issues},
      {"reevaluation",
       {{"performed", r.reevaluation.performed},
        {"refinement_factor", r.reevaluation.refinement_factor},
        {"entropy_sum", r.reevaluation.entropy_sum},
        {"coherence", r.reevaluation.coherence},
        {"kraus_bound", r.reevaluation.kraus_bound},
        {"confirmed", r.reevaluation.confirmed}}},
      {"reproducibility", {{"seed", r.config.seed}, {"config", r.config}, {"config_hash", r.config_hash}}},
      {"frames", {{"a", r.frame_a}, {"b", r.frame_b}}},
      {"restart_minima", std::move(minima)},
  };
  if (r.deutsch_floor_breach)
    j["bug_signal"] = "entropy sum below the proven Deutsch floor: implementation error";
}

std::string trace_csv(const std::vector<RestartTrace>& trace) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "restart,seed,start_value,final_value,iterations,nudges,stop\n";
  for (const auto& t : trace)
    os << t.restart << ',' << t.seed << ',' << t.start_value << ',' << t.final_value << ',' << t.iterations << ','
       << t.nudges << ',' << to_string(t.stop) << '\n';
  return os.str();
}

}  // namespace entroframe
