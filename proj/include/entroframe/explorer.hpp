#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "entroframe/bounds.hpp"
#include "entroframe/frames.hpp"
#include "entroframe/optimizer_config.hpp"

namespace entroframe {

struct GradientResult {
  double value = 0.0;  // S_tau(h) + S_omega(h)
  Vector gradient;     // real gradient packed as complex: d/dRe h_i + i d/dIm h_i
};

/// Analytic gradient of h -> S_tau(h/||h||) + S_omega(h/||h||).
/// Throws PerturbationRequired if a coefficient vanishes.
GradientResult entropy_sum_gradient(const FrameFamily& f, const FrameFamily& g, const Vector& h);

/// Removes the component along h (real inner product).
Vector tangent_projection(const Vector& h, const Vector& grad);

enum class StopReason { GradTol, StepTol, MaxIters };
std::string to_string(StopReason r);

struct RestartTrace {
  int restart = 0;
  std::uint64_t seed = 0;
  double start_value = 0.0;
  double final_value = 0.0;
  int iterations = 0;
  int nudges = 0;
  StopReason stop = StopReason::MaxIters;
};

struct MinimizeResult {
  Vector argmin;
  double min_value = 0.0;
  int best_restart = 0;
  std::vector<RestartTrace> trace;
};

/// Multi-start projected gradient descent with backtracking on the unit sphere.
/// Deterministic for a fixed config regardless of thread count.
MinimizeResult minimize_entropy_sum(const FrameFamily& f, const FrameFamily& g, const OptimizerConfig& cfg);

enum class ProbeVerdict { SupportsConjecture, ViolationCandidate, HypothesisNotMet };
std::string to_string(ProbeVerdict v);

/// Confirmation run for a would-be conjecture violation.
struct Reevaluation {
  bool performed = false;
  std::size_t refinement_factor = 1;
  double entropy_sum = 0.0;  // extended precision, at the argmin
  double coherence = 0.0;
  KrausBound kraus_bound;
  bool confirmed = false;
};

struct ProbeReport {
  double min_entropy_sum_found = 0.0;
  Vector argmin;
  bool argmin_in_domain = true;
  double coherence = 0.0;
  std::optional<double> coherence_extrapolated;
  KrausBound kraus_bound;
  double deutsch_bound = 0.0;
  double upper_bound = 0.0;
  std::optional<double> margin_kraus;  // absent when the Kraus bound is infinite
  double margin_deutsch = 0.0;
  double tolerance = kDefaultVerifyTol;
  bool deutsch_floor_breach = false;
  ProbeVerdict verdict = ProbeVerdict::SupportsConjecture;
  std::vector<std::string> hypothesis_issues;
  Reevaluation reevaluation;
  OptimizerConfig config;
  std::string config_hash;
  FrameSummary frame_a;
  FrameSummary frame_b;
  std::vector<RestartTrace> trace;
};

/// Margin below the Kraus bound that makes a minimum a violation candidate.
inline constexpr double kKrausMargin = 1e-6;

ProbeReport probe_kraus(const FrameFamily& f, const FrameFamily& g, const OptimizerConfig& cfg);

void to_json(nlohmann::json& j, const RestartTrace& t);
void to_json(nlohmann::json& j, const ProbeReport& r);

/// restart,seed,start_value,final_value,iterations,nudges,stop
std::string trace_csv(const std::vector<RestartTrace>& trace);

}  // namespace entroframe
