#include "entroframe/pframes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "entroframe/parallel.hpp"

namespace entroframe {

std::string to_string(PRole r) { return r == PRole::Functionals ? "functionals" : "vectors"; }

namespace {

PRole role_from_string(const std::string& s) {
  if (s == "functionals") return PRole::Functionals;
  if (s == "vectors") return PRole::Vectors;
  throw InvalidArgument("unknown p-frame role '" + s + "'");
}

/// |z|^p; the p == 2 branch matches the Hilbert path exactly.
double abs_pow(const Scalar& z, double p) {
  if (p == 2.0) return std::norm(z);
  if (p == 1.0) return std::abs(z);
  return std::pow(std::abs(z), p);
}

}  // namespace

PFrameBase::PFrameBase(double p, PRole role, Field field, Matrix elements,
                       std::shared_ptr<const DiscreteMeasure> measure, std::string mode, double lambda)
    : p_(p), q_(conjugate_exponent(p)), role_(role), field_(field), elements_(std::move(elements)),
      measure_(std::move(measure)), mode_(std::move(mode)), lambda_(lambda) {
  if (!measure_) throw InvalidArgument("p-frame needs a measure");
  if (elements_.rows() < 1) throw InvalidArgument("p-frame dimension must be >= 1");
  if (static_cast<std::size_t>(elements_.cols()) != measure_->size())
    throw InvalidArgument("p-frame element count differs from measure atom count");
  if (!elements_.allFinite()) throw InvalidArgument("p-frame elements must be finite");
  for (Eigen::Index a = 0; a < elements_.cols(); ++a)
    max_norm_ = std::max(max_norm_, lp_norm(elements_.col(a), q_));
  one_bounded_ = max_norm_ <= 1.0 + kOneBoundedSlack;
}

Vector PFrameBase::pair_with(const Vector& x) const {
  if (x.size() != dim())
    throw InvalidArgument("p-frame pairing: point has dimension " + std::to_string(x.size()) +
                          ", frame has " + std::to_string(dim()));
  return elements_.transpose() * x;
}

namespace {

struct SplitLayout {
  Matrix elements;
  std::shared_ptr<const DiscreteMeasure> measure;
  std::string mode;
};

SplitLayout split_layout(Eigen::Index d, double p, const std::vector<int>& splits, double lambda) {
  if (d < 1) throw InvalidArgument("p-frame dimension must be >= 1");
  if (p < 1.0) throw InvalidArgument("exponent p must be >= 1");
  if (static_cast<Eigen::Index>(splits.size()) != d)
    throw InvalidArgument("splits must have one entry per coordinate (got " + std::to_string(splits.size()) +
                          ", need " + std::to_string(d) + ")");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be positive");
  std::size_t total = 0;
  for (int s : splits) {
    if (s < 1) throw InvalidArgument("every split count must be >= 1");
    total += static_cast<std::size_t>(s);
  }
  const double scale = std::pow(lambda, -1.0 / p);
  Matrix e = Matrix::Zero(d, static_cast<Eigen::Index>(total));
  std::vector<double> atoms, weights;
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const int s = splits[static_cast<std::size_t>(i)];
    for (int c = 0; c < s; ++c, ++col) {
      e(i, col) = scale;
      atoms.push_back(static_cast<double>(col));
      weights.push_back(lambda / s);
    }
  }
  const bool plain = lambda == 1.0 && std::all_of(splits.begin(), splits.end(), [](int s) { return s == 1; });
  return {std::move(e),
          std::make_shared<const DiscreteMeasure>(plain ? DiscreteMeasure::counting(total)
                                                        : DiscreteMeasure(MeasureKind::Counting, std::move(atoms),
                                                                          std::move(weights))),
          plain ? "coordinate" : (lambda == 1.0 ? "split" : "lambda")};
}

}  // namespace

PFrameFunctionals make_coordinate_pframe(Eigen::Index d, double p, Field field) {
  return make_split_coordinate_pframe(d, p, std::vector<int>(static_cast<std::size_t>(std::max<Eigen::Index>(d, 0)), 1),
                                      1.0, field);
}

PFrameFunctionals make_split_coordinate_pframe(Eigen::Index d, double p, const std::vector<int>& splits,
                                               double lambda, Field field) {
  auto l = split_layout(d, p, splits, lambda);
  return {p, field, std::move(l.elements), std::move(l.measure), std::move(l.mode), lambda};
}

PFrameVectors make_coordinate_pvectors(Eigen::Index d, double p, Field field) {
  return make_split_coordinate_pvectors(d, p, std::vector<int>(static_cast<std::size_t>(std::max<Eigen::Index>(d, 0)), 1),
                                        1.0, field);
}

PFrameVectors make_split_coordinate_pvectors(Eigen::Index d, double p, const std::vector<int>& splits,
                                             double lambda, Field field) {
  auto l = split_layout(d, p, splits, lambda);
  return {p, field, std::move(l.elements), std::move(l.measure), std::move(l.mode), lambda};
}

PFrameFunctionals functionals_from_frame(const FrameFamily& f) {
  return {2.0, f.field(), f.vectors().conjugate(), f.measure_ptr(), "hilbert"};
}

PFrameVectors vectors_from_frame(const FrameFamily& f) {
  return {2.0, f.field(), f.vectors(), f.measure_ptr(), "hilbert"};
}

double parseval_p_defect(const PFrameBase& pf, std::size_t n_samples, std::uint64_t seed) {
  std::vector<double> defects(n_samples, 0.0);
  parallel_for(n_samples, [&](std::size_t i) {
    Rng rng(mix_seed(seed, i));
    const Vector x = random_unit_vector_p(rng, pf.dim(), pf.field(), pf.p());
    const Vector v = pf.pair_with(x);
    std::vector<double> terms(static_cast<std::size_t>(v.size()));
    for (Eigen::Index a = 0; a < v.size(); ++a)
      terms[static_cast<std::size_t>(a)] = pf.measure().weight(static_cast<std::size_t>(a)) * abs_pow(v[a], pf.p());
    defects[i] = std::abs(stable_sum(terms) - 1.0);
  });
  return n_samples == 0 ? 0.0 : *std::max_element(defects.begin(), defects.end());
}

namespace {

EntropyValue p_entropy_impl(const PFrameBase& pf, const Vector& x) {
  if (x.size() != pf.dim()) throw InvalidArgument("p-entropy: point has the wrong dimension");
  const double n = lp_norm(x, pf.p());
  if (!(n > 0.0)) throw InvalidArgument("p-entropy is undefined at the zero point");
  const Vector v = pf.pair_with(x / n);
  std::vector<double> q(static_cast<std::size_t>(v.size()));
  for (Eigen::Index a = 0; a < v.size(); ++a)
    q[static_cast<std::size_t>(a)] = std::abs(v[a]) < kExactZero ? 0.0 : abs_pow(v[a], pf.p());
  EntropyValue out;
  auto [value, masked] = weighted_entropy(pf.measure(), q);
  out.value = value;
  out.masked_atoms = masked;
  out.in_domain = masked == 0;
  out.one_bounded = pf.one_bounded();
  return out;
}

}  // namespace

EntropyValue p_entropy(const PFrameFunctionals& pf, const Vector& x) { return p_entropy_impl(pf, x); }

EntropyValue p_entropy_dual(const PFrameVectors& pv, const Vector& f) { return p_entropy_impl(pv, f); }

namespace {

struct CouplingEval {
  double value;
  Eigen::Index alpha;
  Eigen::Index beta;
};

CouplingEval coupling_at(const PFrameBase& a, const PFrameBase& b, const Vector& y) {
  CouplingEval e{};
  const double ma = a.pair_with(y).cwiseAbs().maxCoeff(&e.alpha);
  const double mb = b.pair_with(y).cwiseAbs().maxCoeff(&e.beta);
  e.value = ma * mb;
  return e;
}

/// Unit l^p point attaining |e . y| = ||e||_q (Hoelder equality).
Vector norming_point(const Vector& e, double p) {
  const Eigen::Index d = e.size();
  Vector y = Vector::Zero(d);
  auto phase = [](const Scalar& z) { return std::abs(z) > 0.0 ? std::conj(z) / std::abs(z) : Scalar(1.0); };
  if (p == 1.0) {
    Eigen::Index k = 0;
    e.cwiseAbs().maxCoeff(&k);
    y[k] = phase(e[k]);
    return y;
  }
  const double q = conjugate_exponent(p);
  for (Eigen::Index i = 0; i < d; ++i) y[i] = phase(e[i]) * std::pow(std::abs(e[i]), q - 1.0);
  const double n = lp_norm(y, p);
  if (!(n > 0.0)) {
    y[0] = 1.0;
    return y;
  }
  return y / n;
}

struct SearchOutcome {
  double value = -1.0;
  Vector y;
  Eigen::Index alpha = 0;
  Eigen::Index beta = 0;
};

/// Compass search on the l^p sphere; each trial point is renormalized.
SearchOutcome polish(const PFrameBase& a, const PFrameBase& b, Vector y, bool complex_search,
                     const OptimizerConfig& cfg) {
  const double p = a.p();
  y /= lp_norm(y, p);
  CouplingEval best = coupling_at(a, b, y);
  double step = 0.25;
  const Eigen::Index d = y.size();
  const std::vector<Scalar> dirs = complex_search
                                       ? std::vector<Scalar>{1.0, -1.0, Scalar(0, 1), Scalar(0, -1)}
                                       : std::vector<Scalar>{1.0, -1.0};
  for (int it = 0; it < cfg.max_iters && step >= cfg.step_tol; ++it) {
    bool improved = false;
    for (Eigen::Index i = 0; i < d; ++i) {
      for (const Scalar& dir : dirs) {
        Vector t = y;
        t[i] += step * dir;
        const double n = lp_norm(t, p);
        if (!(n > 0.0)) continue;
        t /= n;
        const CouplingEval e = coupling_at(a, b, t);
        if (e.value > best.value) {
          best = e;
          y = std::move(t);
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return {best.value, std::move(y), best.alpha, best.beta};
}

}  // namespace

CouplingResult coupling_sup(const PFrameBase& a, const PFrameBase& b, const OptimizerConfig& cfg) {
  cfg.validate();
  if (a.dim() != b.dim()) throw InvalidArgument("coupling_sup: dimension mismatch");
  if (a.p() != b.p()) throw InvalidArgument("coupling_sup: exponent mismatch");
  const bool complex_search = a.field() == Field::Complex || b.field() == Field::Complex;
  const Field field = complex_search ? Field::Complex : Field::Real;

  std::vector<Vector> starts;
  for (const PFrameBase* f : {&a, &b})
    for (Eigen::Index c = 0; c < f->elements().cols(); ++c)
      starts.push_back(norming_point(f->elements().col(c), a.p()));
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(r)));
    starts.push_back(random_unit_vector_p(rng, a.dim(), field, a.p()));
  }

  std::vector<SearchOutcome> outcomes(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) { outcomes[i] = polish(a, b, starts[i], complex_search, cfg); });

  std::size_t best = 0;
  for (std::size_t i = 1; i < outcomes.size(); ++i)
    if (outcomes[i].value > outcomes[best].value) best = i;
  CouplingResult out;
  out.value = outcomes[best].value;
  out.argmax = outcomes[best].y;
  out.alpha = static_cast<std::size_t>(outcomes[best].alpha);
  out.beta = static_cast<std::size_t>(outcomes[best].beta);
  out.starts = starts.size();
  return out;
}

namespace {

void require_compatible(const PFrameBase& a, const PFrameBase& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("p-frames differ in dimension");
  if (a.p() != b.p()) throw InvalidArgument("p-frames differ in exponent");
  if (a.role() != b.role()) throw InvalidArgument("p-frames differ in role");
  if (!a.one_bounded() || !b.one_bounded()) throw InvalidArgument("p-frame bounds require 1-bounded families");
}

}  // namespace

PBoundReport verify_fds_with_coupling(const PFrameBase& a, const PFrameBase& b, const Vector& x,
                                      double coupling, double tol) {
  require_compatible(a, b);
  PBoundReport r;
  r.p = a.p();
  r.role = a.role();
  r.entropy_a = p_entropy_impl(a, x);
  r.entropy_b = p_entropy_impl(b, x);
  r.entropy_sum = r.entropy_a.value + r.entropy_b.value;
  r.in_domain = r.entropy_a.in_domain && r.entropy_b.in_domain;
  r.coupling = coupling;
  r.lower = coupling > 0.0 ? -r.p * std::log(coupling) : std::numeric_limits<double>::infinity();
  const double mass = a.measure().total_mass() * b.measure().total_mass();
  r.upper = std::log(mass);
  r.mass_bound = std::pow(mass, -1.0 / r.p);
  r.slack_lower = r.entropy_sum - r.lower;
  r.slack_upper = r.upper - r.entropy_sum;
  r.slack_mass = coupling - r.mass_bound;
  r.tolerance = tol;
  r.lower_pass = r.slack_lower + tol >= 0.0;
  r.upper_pass = r.slack_upper + tol >= 0.0;
  r.mass_pass = r.slack_mass + tol >= 0.0;
  return r;
}

PBoundReport verify_fds(const PFrameFunctionals& a, const PFrameFunctionals& b, const Vector& x,
                        const OptimizerConfig& cfg, double tol) {
  require_compatible(a, b);
  return verify_fds_with_coupling(a, b, x, coupling_sup(a, b, cfg).value, tol);
}

PBoundReport verify_dual_fds(const PFrameVectors& a, const PFrameVectors& b, const Vector& f,
                             const OptimizerConfig& cfg, double tol) {
  require_compatible(a, b);
  return verify_fds_with_coupling(a, b, f, coupling_sup(a, b, cfg).value, tol);
}

PBatchReport verify_p_batch(const PFrameBase& a, const PFrameBase& b, std::size_t n_samples,
                            const OptimizerConfig& cfg, double tol) {
  require_compatible(a, b);
  if (n_samples < 1) throw InvalidArgument("verify_p_batch: n_samples must be >= 1");
  PBatchReport out;
  out.n_samples = n_samples;
  out.seed = cfg.seed;
  out.coupling = coupling_sup(a, b, cfg);
  const Field field = a.field() == Field::Complex || b.field() == Field::Complex ? Field::Complex : Field::Real;
  std::vector<PBoundReport> reports(n_samples);
  // Sample streams are offset so they never coincide with the search restarts.
  parallel_for(n_samples, [&](std::size_t i) {
    Rng rng(mix_seed(cfg.seed ^ 0x5A5A5A5AULL, i));
    reports[i] = verify_fds_with_coupling(a, b, random_unit_vector_p(rng, a.dim(), field, a.p()),
                                          out.coupling.value, tol);
  });
  out.min_slack_lower = out.min_slack_upper = std::numeric_limits<double>::infinity();
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_samples; ++i) {
    const auto& r = reports[i];
    if (!r.passed()) ++out.failures;
    if (!r.in_domain) ++out.hypothesis_not_met;
    out.min_slack_lower = std::min(out.min_slack_lower, r.slack_lower);
    out.min_slack_upper = std::min(out.min_slack_upper, r.slack_upper);
    const double s = std::min(r.slack_lower, r.slack_upper);
    if (s < worst) {
      worst = s;
      out.worst_index = i;
    }
  }
  out.slack_mass = reports.front().slack_mass;
  out.worst = reports[out.worst_index];
  return out;
}

void to_json(nlohmann::json& j, const PFrameBase& f) {
  nlohmann::json elems = nlohmann::json::array();
  for (Eigen::Index a = 0; a < f.elements().cols(); ++a) {
    nlohmann::json v = nlohmann::json::array();
    for (Eigen::Index i = 0; i < f.dim(); ++i) {
      const Scalar z = f.elements()(i, a);
      if (f.field() == Field::Real)
        v.push_back(nlohmann::json::array({z.real()}));
      else
        v.push_back(nlohmann::json::array({z.real(), z.imag()}));
    }
    elems.push_back(std::move(v));
  }
  j = nlohmann::json{{"field", to_string(f.field())},
                     {"dim", f.dim()},
                     {"p", f.p()},
                     {"role", to_string(f.role())},
                     {"mode", f.mode()},
                     {"lambda", f.lambda()},
                     {"measure", f.measure()},
                     {"vectors", std::move(elems)}};
}

PFrameBase pframe_from_json(const nlohmann::json& j) {
  try {
    const Field field = field_from_string(j.at("field").get<std::string>());
    const auto dim = j.at("dim").get<Eigen::Index>();
    if (dim < 1) throw InvalidArgument("'dim' must be >= 1");
    const auto& vecs = j.at("vectors");
    Matrix e(dim, static_cast<Eigen::Index>(vecs.size()));
    for (std::size_t a = 0; a < vecs.size(); ++a) {
      if (!vecs[a].is_array() || static_cast<Eigen::Index>(vecs[a].size()) != dim)
        throw InvalidArgument("p-frame element " + std::to_string(a) + " does not have dim entries");
      for (Eigen::Index i = 0; i < dim; ++i) {
        const auto& x = vecs[a][static_cast<std::size_t>(i)];
        if (x.is_number()) {
          e(i, static_cast<Eigen::Index>(a)) = x.get<double>();
        } else {
          if (!x.is_array() || x.empty() || x.size() > 2) throw InvalidArgument("entry must be [re] or [re, im]");
          const double im = x.size() == 2 ? x[1].get<double>() : 0.0;
          if (field == Field::Real && im != 0.0) throw InvalidArgument("real p-frame entry has an imaginary part");
          e(i, static_cast<Eigen::Index>(a)) = Scalar(x[0].get<double>(), im);
        }
      }
    }
    return PFrameBase(j.at("p").get<double>(), role_from_string(j.at("role").get<std::string>()), field,
                      std::move(e), std::make_shared<const DiscreteMeasure>(measure_from_json(j.at("measure"))),
                      j.value("mode", std::string("custom")), j.value("lambda", 1.0));
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidArgument(std::string("malformed p-frame: ") + ex.what());
  }
}

PFrameFunctionals as_functionals(const PFrameBase& f) {
  return {f.p(), f.field(), f.elements(), f.measure_ptr(), f.mode(), f.lambda()};
}

PFrameVectors as_vectors(const PFrameBase& f) {
  return {f.p(), f.field(), f.elements(), f.measure_ptr(), f.mode(), f.lambda()};
}

void to_json(nlohmann::json& j, const CouplingResult& c) {
  nlohmann::json y = nlohmann::json::array();
  for (const auto& z : c.argmax) y.push_back(nlohmann::json::array({z.real(), z.imag()}));
  j = nlohmann::json{{"value", c.value},
                     {"is_lower_bound_on_sup", true},
                     {"argmax", std::move(y)},
                     {"alpha", c.alpha},
                     {"beta", c.beta},
                     {"starts", c.starts}};
}

void to_json(nlohmann::json& j, const PBoundReport& r) {
  j = nlohmann::json{
      {"p", r.p},
      {"role", to_string(r.role)},
      {"entropy_a", r.entropy_a},
      {"entropy_b", r.entropy_b},
      {"entropy_sum", r.entropy_sum},
      {"in_domain", r.in_domain},
      {"coupling", r.coupling},
      {"lower", r.lower},
      {"upper", r.upper},
      {"mass_bound", r.mass_bound},
      {"slack_lower", r.slack_lower},
      {"slack_upper", r.slack_upper},
      {"slack_mass", r.slack_mass},
      {"tolerance", r.tolerance},
      {"verdict",
       {{"lower", r.lower_pass ? "pass" : "fail"},
        {"upper", r.upper_pass ? "pass" : "fail"},
        {"mass", r.mass_pass ? "pass" : "fail"},
        {"hypothesis", r.in_domain ? "met" : "hypothesis-not-met"}}},
      {"note", "coupling is a search lower bound on the supremum, so the checked lower bound "
               "is at least as strong as the true one"},
  };
}

void to_json(nlohmann::json& j, const PBatchReport& r) {
  j = nlohmann::json{{"n_samples", r.n_samples},
                     {"seed", r.seed},
                     {"coupling", r.coupling},
                     {"failures", r.failures},
                     {"hypothesis_not_met", r.hypothesis_not_met},
                     {"min_slack_lower", r.min_slack_lower},
                     {"min_slack_upper", r.min_slack_upper},
                     {"slack_mass", r.slack_mass},
                     {"worst_index", r.worst_index},
                     {"worst", r.worst}};
}

}  // namespace entroframe
