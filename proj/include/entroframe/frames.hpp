#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "entroframe/core.hpp"
#include "entroframe/measure.hpp"

namespace entroframe {

/// Records how a continuous frame was generated so it can be rebuilt on a
/// finer (or coarser) quadrature grid.
struct FrameOrigin {
  std::string builder;  // "circle"
  double offset = 0.0;

  bool operator==(const FrameOrigin&) const = default;
};

/// Indexed family {tau_alpha} in K^d attached to a discrete measure.
///
/// Vectors are stored unscaled, one per column; quadrature weights live only
/// in the measure. Immutable after construction.
class FrameFamily {
 public:
  FrameFamily(Field field, Matrix vectors, std::shared_ptr<const DiscreteMeasure> measure,
              std::optional<FrameOrigin> origin = std::nullopt);

  Field field() const { return field_; }
  Eigen::Index dim() const { return vectors_.rows(); }
  std::size_t size() const { return static_cast<std::size_t>(vectors_.cols()); }
  const Matrix& vectors() const { return vectors_; }
  auto vector(std::size_t i) const { return vectors_.col(static_cast<Eigen::Index>(i)); }
  const DiscreteMeasure& measure() const { return *measure_; }
  const std::shared_ptr<const DiscreteMeasure>& measure_ptr() const { return measure_; }
  const std::optional<FrameOrigin>& origin() const { return origin_; }
  bool refinable() const { return origin_.has_value(); }

 private:
  Field field_;
  Matrix vectors_;
  std::shared_ptr<const DiscreteMeasure> measure_;
  std::optional<FrameOrigin> origin_;
};

/// Analysis coefficients <h, tau_alpha> together with the atoms where they vanish.
struct CoefficientFamily {
  Vector values;
  std::shared_ptr<const DiscreteMeasure> measure;
  std::vector<std::size_t> zero_mask;  // atoms with |value| < kExactZero

  /// h lies in H_tau iff no coefficient vanishes.
  bool in_domain() const { return zero_mask.empty(); }
  /// sum_alpha w_alpha |value_alpha|^2
  double energy() const;
};

/// S = sum_alpha w_alpha tau_alpha tau_alpha^*
Matrix frame_operator(const FrameFamily& f);

/// ||S - I||_F
double parseval_defect(const FrameFamily& f);

/// max_alpha ||tau_alpha|| - 1
double one_bounded_excess(const FrameFamily& f);

inline bool is_one_bounded(const FrameFamily& f) {
  return one_bounded_excess(f) <= kOneBoundedSlack;
}

/// max over atom pairs of |<tau_alpha, omega_beta>|. The grid maximum can
/// undershoot the continuous supremum; see coherence_extrapolated.
double coherence(const FrameFamily& f, const FrameFamily& g);

/// Richardson estimate of the continuous-sup coherence from refinements x1, x2, x4,
/// assuming an O(N^-2) grid error. Returns nullopt unless both frames are refinable.
std::optional<double> coherence_extrapolated(const FrameFamily& f, const FrameFamily& g);

/// values_alpha = <h, tau_alpha> = sum_i h_i conj(tau_alpha,i)
CoefficientFamily analysis(const FrameFamily& f, const Vector& h);

FrameFamily make_onb(Eigen::Index d, Field field = Field::Complex);
/// Unitary DFT basis, vectors F_k with entries exp(2 pi i j k / d) / sqrt(d).
FrameFamily make_fourier(Eigen::Index d);
/// tau_theta = (cos theta, sin theta) / sqrt(pi) on uniform_circle(n, offset). Real field.
FrameFamily make_circle_frame(std::size_t n, double offset = 0.0);
/// Three vectors sqrt(2/3) (cos 2 pi k/3, sin 2 pi k/3) with counting measure. Real field.
FrameFamily make_mercedes();
/// Rows of the first d columns of the orthogonal factor of a seeded Gaussian
/// n x n matrix; counting measure on n atoms.
FrameFamily make_random_parseval(Eigen::Index d, std::size_t n, std::uint64_t seed,
                                 Field field = Field::Complex);

/// Rebuild a refinable frame with node count multiplied by factor.
FrameFamily refine_frame(const FrameFamily& f, std::size_t factor);
/// Rebuild a refinable frame with node count divided by factor (must divide evenly).
std::optional<FrameFamily> coarsen_frame(const FrameFamily& f, std::size_t factor);

/// Parseval-defect ceiling applied when frames are loaded for verification.
inline constexpr double kParsevalGate = 1e-8;

void to_json(nlohmann::json& j, const FrameFamily& f);
FrameFamily frame_from_json(const nlohmann::json& j);

/// Cheap identifying summary embedded in reports.
struct FrameSummary {
  Field field = Field::Complex;
  Eigen::Index dim = 0;
  std::size_t atoms = 0;
  MeasureKind kind = MeasureKind::Counting;
  double total_mass = 0.0;
  std::optional<std::size_t> grid_resolution;  // node count for quadrature measures
};

FrameSummary summarize(const FrameFamily& f);
void to_json(nlohmann::json& j, const FrameSummary& s);

}  // namespace entroframe
