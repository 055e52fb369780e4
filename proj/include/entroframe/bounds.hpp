#pragma once

#include <cstdint>
#include <optional>

#include <nlohmann/json_fwd.hpp>

#include "entroframe/entropy.hpp"
#include "entroframe/frames.hpp"

namespace entroframe {

/// |<x,a><x,b>|
double buzano_lhs(const Vector& x, const Vector& a, const Vector& b);
/// ||x||^2 (||a|| ||b|| + |<a,b>|) / 2
double buzano_rhs(const Vector& x, const Vector& a, const Vector& b);

/// log(mu(Omega) nu(Delta))
double deutsch_upper(const FrameFamily& f, const FrameFamily& g);

/// -2 log((1 + c) / 2) for c in [0, 1].
double deutsch_lower(double c);

/// -2 log c. At c == 0 the bound is infinite; `infinite` carries that instead of a numeric inf.
struct KrausBound {
  double value = 0.0;
  bool infinite = false;
};
KrausBound kraus_lower(double c);

/// Default absolute verification slack; quadrature hints are added for discretized frames.
inline constexpr double kDefaultVerifyTol = 1e-9;
/// Slack below which a bound is reported as nearly attained.
inline constexpr double kNearEqualitySlack = 1e-6;

/// Certificate of the entropic sandwich for a single input vector.
struct BoundReport {
  double upper = 0.0;
  double entropy_sum = 0.0;
  double deutsch_lower = 0.0;
  KrausBound kraus_lower;
  double coherence = 0.0;
  bool in_domain = true;
  double slack_upper = 0.0;  // upper - entropy_sum
  double slack_lower = 0.0;  // entropy_sum - deutsch_lower
  double tolerance = 0.0;    // base tolerance plus quadrature hints
  bool upper_pass = true;
  bool lower_pass = true;
  bool near_equality_upper = false;
  bool near_equality_lower = false;
  EntropyPair entropies;
  FrameSummary frame_a;
  FrameSummary frame_b;

  bool passed() const { return upper_pass && lower_pass; }
};

/// Checks log(mu nu) + tol >= S_tau(h) + S_omega(h) and S_tau(h) + S_omega(h) + tol >= deutsch_lower.
/// Both frames must be 1-bounded and share the dimension; h != 0.
BoundReport verify_sandwich(const FrameFamily& f, const FrameFamily& g, const Vector& h,
                            double tol = kDefaultVerifyTol);

struct BatchReport {
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  double base_tolerance = kDefaultVerifyTol;
  std::size_t failures = 0;
  std::size_t hypothesis_not_met = 0;
  std::size_t near_equality = 0;
  double min_slack_upper = 0.0;
  double max_slack_upper = 0.0;
  double min_slack_lower = 0.0;
  double max_slack_lower = 0.0;
  std::size_t worst_index = 0;
  BoundReport worst;  // smallest min(slack_upper, slack_lower)
};

/// Field used when sampling test vectors for a pair of frames.
Field sampling_field(const FrameFamily& f, const FrameFamily& g);

/// Verifies the sandwich on n_samples seeded unit vectors (sample i uses mix_seed(seed, i)).
BatchReport verify_batch(const FrameFamily& f, const FrameFamily& g, std::size_t n_samples,
                         std::uint64_t seed, double tol = kDefaultVerifyTol);

/// max over sampled unit h and atom pairs of |<h,tau_alpha><h,omega_beta>| minus (1 + coherence) / 2.
double coupling_bound_check(const FrameFamily& f, const FrameFamily& g, std::size_t n_samples,
                            std::uint64_t seed);

void to_json(nlohmann::json& j, const KrausBound& k);
void to_json(nlohmann::json& j, const BoundReport& r);
void to_json(nlohmann::json& j, const BatchReport& r);

}  // namespace entroframe
