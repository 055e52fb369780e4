#pragma once

#include <optional>
#include <span>

#include <nlohmann/json_fwd.hpp>

#include "entroframe/frames.hpp"

namespace entroframe {

/// Continuous Shannon entropy in nats, with the 0 log 0 = 0 convention.
struct EntropyValue {
  double value = 0.0;
  bool in_domain = true;        // no coefficient vanished
  std::size_t masked_atoms = 0;
  /// |S(N) - S(N/2)| for frames that can be rebuilt on a coarser grid.
  std::optional<double> quadrature_error_hint;
  /// False when the frame is not 1-bounded; the value may then be negative.
  bool one_bounded = true;
};

/// -sum_alpha w_alpha q_alpha log q_alpha, skipping atoms with q_alpha == 0.
/// Returns the value and the number of skipped atoms.
std::pair<double, std::size_t> weighted_entropy(const DiscreteMeasure& m, std::span<const double> q);

/// Same sum accumulated in long double.
long double weighted_entropy_extended(const DiscreteMeasure& m, std::span<const long double> q);

/// S_tau(h) with p_alpha = |<h/||h||, tau_alpha>|^2. Throws InvalidArgument for h == 0.
EntropyValue shannon_entropy(const FrameFamily& f, const Vector& h, bool with_quadrature_hint = true);

/// Extended-precision re-evaluation (long double products and accumulation).
long double shannon_entropy_extended(const FrameFamily& f, const Vector& h);

struct EntropyPair {
  EntropyValue first;
  EntropyValue second;
  double sum = 0.0;
  bool in_domain = true;  // h in H_tau and H_omega
};

EntropyPair entropy_sum(const FrameFamily& f, const FrameFamily& g, const Vector& h,
                        bool with_quadrature_hint = true);

void to_json(nlohmann::json& j, const EntropyValue& e);

}  // namespace entroframe
