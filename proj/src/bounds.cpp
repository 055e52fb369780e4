#include "entroframe/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <nlohmann/json.hpp>

#include "entroframe/parallel.hpp"

namespace entroframe {

double buzano_lhs(const Vector& x, const Vector& a, const Vector& b) {
  // <x,a> = a^* x
  return std::abs(a.dot(x)) * std::abs(b.dot(x));
}

double buzano_rhs(const Vector& x, const Vector& a, const Vector& b) {
  return x.squaredNorm() * (a.norm() * b.norm() + std::abs(b.dot(a))) / 2.0;
}

double deutsch_upper(const FrameFamily& f, const FrameFamily& g) {
  return std::log(f.measure().total_mass() * g.measure().total_mass());
}

namespace {

// Coherences a rounding error above 1 are clamped; anything further out is rejected.
double checked_coherence(double c, const char* who) {
  if (!(c >= 0.0) || c > 1.0 + kOneBoundedSlack)
    throw InvalidArgument(std::string(who) + ": coherence must lie in [0, 1], got " + std::to_string(c));
  return std::min(c, 1.0);
}

}  // namespace

double deutsch_lower(double c) {
  c = checked_coherence(c, "deutsch_lower");
  return -2.0 * std::log1p((c - 1.0) / 2.0);
}

KrausBound kraus_lower(double c) {
  c = checked_coherence(c, "kraus_lower");
  if (c == 0.0) return {std::numeric_limits<double>::infinity(), true};
  return {-2.0 * std::log(c), false};
}

namespace {

void require_pair(const FrameFamily& f, const FrameFamily& g) {
  if (f.dim() != g.dim())
    throw InvalidArgument("dimension mismatch (" + std::to_string(f.dim()) + " vs " +
                          std::to_string(g.dim()) + ")");
  if (!is_one_bounded(f) || !is_one_bounded(g))
    throw InvalidArgument("sandwich verification requires 1-bounded frames");
}

BoundReport sandwich_with_coherence(const FrameFamily& f, const FrameFamily& g, const Vector& h,
                                    double tol, double coh) {
  BoundReport r;
  r.entropies = entropy_sum(f, g, h);
  r.entropy_sum = r.entropies.sum;
  r.in_domain = r.entropies.in_domain;
  r.upper = deutsch_upper(f, g);
  r.coherence = coh;
  r.deutsch_lower = deutsch_lower(coh);
  r.kraus_lower = kraus_lower(coh);
  r.tolerance = tol + r.entropies.first.quadrature_error_hint.value_or(0.0) +
                r.entropies.second.quadrature_error_hint.value_or(0.0);
  r.slack_upper = r.upper - r.entropy_sum;
  r.slack_lower = r.entropy_sum - r.deutsch_lower;
  r.upper_pass = r.slack_upper + r.tolerance >= 0.0;
  r.lower_pass = r.slack_lower + r.tolerance >= 0.0;
  r.near_equality_upper = std::abs(r.slack_upper) < kNearEqualitySlack;
  r.near_equality_lower = std::abs(r.slack_lower) < kNearEqualitySlack;
  r.frame_a = summarize(f);
  r.frame_b = summarize(g);
  return r;
}

}  // namespace

BoundReport verify_sandwich(const FrameFamily& f, const FrameFamily& g, const Vector& h, double tol) {
  require_pair(f, g);
  if (h.size() != f.dim()) throw InvalidArgument("verify_sandwich: h has the wrong dimension");
  if (h.norm() == 0.0) throw InvalidArgument("verify_sandwich: h must be nonzero");
  return sandwich_with_coherence(f, g, h, tol, coherence(f, g));
}

Field sampling_field(const FrameFamily& f, const FrameFamily& g) {
  return f.field() == Field::Real && g.field() == Field::Real ? Field::Real : Field::Complex;
}

BatchReport verify_batch(const FrameFamily& f, const FrameFamily& g, std::size_t n_samples,
                         std::uint64_t seed, double tol) {
  require_pair(f, g);
  if (n_samples < 1) throw InvalidArgument("verify_batch: n_samples must be >= 1");
  const double coh = coherence(f, g);
  const Field field = sampling_field(f, g);
  std::vector<BoundReport> reports(n_samples);
  parallel_for(n_samples, [&](std::size_t i) {
    Rng rng(mix_seed(seed, i));
    reports[i] = sandwich_with_coherence(f, g, random_unit_vector(rng, f.dim(), field), tol, coh);
  });

  BatchReport out;
  out.n_samples = n_samples;
  out.seed = seed;
  out.base_tolerance = tol;
  out.min_slack_upper = out.min_slack_lower = std::numeric_limits<double>::infinity();
  out.max_slack_upper = out.max_slack_lower = -std::numeric_limits<double>::infinity();
  double worst_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_samples; ++i) {
    const BoundReport& r = reports[i];
    if (!r.passed()) ++out.failures;
    if (!r.in_domain) ++out.hypothesis_not_met;
    if (r.near_equality_upper || r.near_equality_lower) ++out.near_equality;
    out.min_slack_upper = std::min(out.min_slack_upper, r.slack_upper);
    out.max_slack_upper = std::max(out.max_slack_upper, r.slack_upper);
    out.min_slack_lower = std::min(out.min_slack_lower, r.slack_lower);
    out.max_slack_lower = std::max(out.max_slack_lower, r.slack_lower);
    const double s = std::min(r.slack_upper, r.slack_lower);
    if (s < worst_slack) {
      worst_slack = s;
      out.worst_index = i;
    }
  }
  out.worst = reports[out.worst_index];
  return out;
}

double coupling_bound_check(const FrameFamily& f, const FrameFamily& g, std::size_t n_samples,
                            std::uint64_t seed) {
  require_pair(f, g);
  const double coh = std::min(coherence(f, g), 1.0);
  const Field field = sampling_field(f, g);
  std::vector<double> best(n_samples, 0.0);
  parallel_for(n_samples, [&](std::size_t i) {
    Rng rng(mix_seed(seed, i));
    const Vector h = random_unit_vector(rng, f.dim(), field);
    const double a = (f.vectors().adjoint() * h).cwiseAbs().maxCoeff();
    const double b = (g.vectors().adjoint() * h).cwiseAbs().maxCoeff();
    best[i] = a * b;
  });
  double m = 0.0;
  for (double v : best) m = std::max(m, v);
  return m - (1.0 + coh) / 2.0;
}

void to_json(nlohmann::json& j, const KrausBound& k) {
  if (k.infinite)
    j = nlohmann::json{{"value", nullptr}, {"infinite", true}};
  else
    j = nlohmann::json{{"value", k.value}, {"infinite", false}};
}

void to_json(nlohmann::json& j, const BoundReport& r) {
  j = nlohmann::json{
      {"upper", r.upper},
      {"entropy_sum", r.entropy_sum},
      {"entropy_a", r.entropies.first},
      {"entropy_b", r.entropies.second},
      {"deutsch_lower", r.deutsch_lower},
      {"kraus_lower", r.kraus_lower},
      {"coherence", r.coherence},
      {"in_domain", r.in_domain},
      {"slack_upper", r.slack_upper},
      {"slack_lower", r.slack_lower},
      {"tolerance", r.tolerance},
      {"verdict",
       {{"upper", r.upper_pass ? "pass" : "fail"},
        {"lower", r.lower_pass ? "pass" : "fail"},
        {"hypothesis", r.in_domain ? "met" : "hypothesis-not-met"}}},
      {"near_equality", {{"upper", r.near_equality_upper}, {"lower", r.near_equality_lower}}},
      {"frames", {{"a", r.frame_a}, {"b", r.frame_b}}},
  };
}

void to_json(nlohmann::json& j, const BatchReport& r) {
  j = nlohmann::json{{"n_samples", r.n_samples},
                     {"seed", r.seed},
                     {"base_tolerance", r.base_tolerance},
                     {"failures", r.failures},
                     {"hypothesis_not_met", r.hypothesis_not_met},
                     {"near_equality", r.near_equality},
                     {"min_slack_upper", r.min_slack_upper},
                     {"max_slack_upper", r.max_slack_upper},
                     {"min_slack_lower", r.min_slack_lower},
                     {"max_slack_lower", r.max_slack_lower},
                     {"worst_index", r.worst_index},
                     {"worst", r.worst}};
}

}  // namespace entroframe
