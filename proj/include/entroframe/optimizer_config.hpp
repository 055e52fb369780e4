#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace entroframe {

/// Shared knobs for the multi-start searches (entropy minimization, coupling supremum).
struct OptimizerConfig {
  int restarts = 32;
  int max_iters = 1000;
  double step_tol = 1e-10;
  double grad_tol = 1e-8;
  std::uint64_t seed = 0;
  /// Iterates whose smallest |coefficient| falls below this are nudged off the zero set.
  double barrier_eps = 1e-12;

  /// Throws InvalidArgument unless restarts >= 1, max_iters >= 1 and all tolerances > 0.
  void validate() const;
  /// Stable hash of all fields.
  std::string hash() const;
};

void to_json(nlohmann::json& j, const OptimizerConfig& c);
void from_json(const nlohmann::json& j, OptimizerConfig& c);

}  // namespace entroframe
