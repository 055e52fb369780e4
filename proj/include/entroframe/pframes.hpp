#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "entroframe/entropy.hpp"
#include "entroframe/frames.hpp"
#include "entroframe/optimizer_config.hpp"

namespace entroframe {

/// Whether the family acts on points (functionals f_alpha on X) or is acted on
/// by functionals (vectors tau_alpha, a frame for X*).
enum class PRole { Functionals, Vectors };

std::string to_string(PRole r);

/// Parseval p-frame data over l^p_d.
///
/// Elements are stored one per column and act through the bilinear pairing
/// e . x = sum_i e_i x_i. In both roles the points being analysed (x for
/// functionals, f for vectors) are normed in l^p, and each element's norm is
/// its l^q norm with 1/p + 1/q = 1. For the vector role this models X as
/// l^q_d, so that X* = l^p_d and coordinate vectors form an exact Parseval
/// p-frame for X*.
class PFrameBase {
 public:
  PFrameBase(double p, PRole role, Field field, Matrix elements,
             std::shared_ptr<const DiscreteMeasure> measure, std::string mode = "custom",
             double lambda = 1.0);

  double p() const { return p_; }
  /// Conjugate exponent (inf for p == 1).
  double q() const { return q_; }
  PRole role() const { return role_; }
  Field field() const { return field_; }
  Eigen::Index dim() const { return elements_.rows(); }
  std::size_t size() const { return static_cast<std::size_t>(elements_.cols()); }
  const Matrix& elements() const { return elements_; }
  const DiscreteMeasure& measure() const { return *measure_; }
  const std::shared_ptr<const DiscreteMeasure>& measure_ptr() const { return measure_; }
  const std::string& mode() const { return mode_; }
  double lambda() const { return lambda_; }
  /// Every element has l^q norm <= 1 (within kOneBoundedSlack).
  bool one_bounded() const { return one_bounded_; }
  double max_element_norm() const { return max_norm_; }

  /// (e_alpha . x) for every atom.
  Vector pair_with(const Vector& x) const;

 private:
  double p_;
  double q_;
  PRole role_;
  Field field_;
  Matrix elements_;
  std::shared_ptr<const DiscreteMeasure> measure_;
  std::string mode_;
  double lambda_;
  bool one_bounded_ = true;
  double max_norm_ = 0.0;
};

/// Functionals {f_alpha} forming a Parseval p-frame for X = l^p_d.
class PFrameFunctionals : public PFrameBase {
 public:
  PFrameFunctionals(double p, Field field, Matrix covectors, std::shared_ptr<const DiscreteMeasure> measure,
                    std::string mode = "custom", double lambda = 1.0)
      : PFrameBase(p, PRole::Functionals, field, std::move(covectors), std::move(measure),
                   std::move(mode), lambda) {}
};

/// Vectors {tau_alpha} forming a Parseval p-frame for X*.
class PFrameVectors : public PFrameBase {
 public:
  PFrameVectors(double p, Field field, Matrix vectors, std::shared_ptr<const DiscreteMeasure> measure,
                std::string mode = "custom", double lambda = 1.0)
      : PFrameBase(p, PRole::Vectors, field, std::move(vectors), std::move(measure), std::move(mode),
                   lambda) {}
};

/// Coordinate functionals on l^p_d with counting measure.
PFrameFunctionals make_coordinate_pframe(Eigen::Index d, double p, Field field = Field::Real);

/// Coordinate functional i repeated splits[i] times with weight lambda / splits[i],
/// each copy scaled by lambda^(-1/p). lambda == 1 keeps total mass d.
PFrameFunctionals make_split_coordinate_pframe(Eigen::Index d, double p, const std::vector<int>& splits,
                                               double lambda = 1.0, Field field = Field::Real);

/// Coordinate vectors, the exact Parseval p-frame for X* = l^p_d.
PFrameVectors make_coordinate_pvectors(Eigen::Index d, double p, Field field = Field::Real);
PFrameVectors make_split_coordinate_pvectors(Eigen::Index d, double p, const std::vector<int>& splits,
                                             double lambda = 1.0, Field field = Field::Real);

/// Hilbert frame seen as p = 2 functionals h -> <h, tau_alpha>.
PFrameFunctionals functionals_from_frame(const FrameFamily& f);
/// Hilbert frame seen as p = 2 vectors acted on by f(tau_alpha) = sum_i f_i tau_alpha,i.
PFrameVectors vectors_from_frame(const FrameFamily& f);

/// max over n_samples seeded points x with ||x||_p = 1 of |sum_alpha w_alpha |e_alpha . x|^p - 1|.
double parseval_p_defect(const PFrameBase& pf, std::size_t n_samples = 1000, std::uint64_t seed = 0);

/// Relative tolerance for the sampled Parseval-p identity.
inline constexpr double kParsevalPGate = 1e-8;

/// S_f(x) = -sum w |f_alpha(x/||x||_p)|^p log |f_alpha(x/||x||_p)|^p.
EntropyValue p_entropy(const PFrameFunctionals& pf, const Vector& x);
/// S_tau(f) = -sum w |f(tau_alpha)/||f||_p|^p log |f(tau_alpha)/||f||_p|^p.
EntropyValue p_entropy_dual(const PFrameVectors& pv, const Vector& f);

/// Best value found for sup over ||y||_p = 1 of max_{alpha,beta} |a_alpha . y| |b_beta . y|.
/// A lower bound on the true supremum.
struct CouplingResult {
  double value = 0.0;
  Vector argmax;
  std::size_t alpha = 0;
  std::size_t beta = 0;
  std::size_t starts = 0;
};

CouplingResult coupling_sup(const PFrameBase& a, const PFrameBase& b, const OptimizerConfig& cfg);

struct PBoundReport {
  double p = 2.0;
  PRole role = PRole::Functionals;
  EntropyValue entropy_a;
  EntropyValue entropy_b;
  double entropy_sum = 0.0;
  bool in_domain = true;
  double coupling = 0.0;      // found supremum (a lower bound on the true one)
  double lower = 0.0;         // -p log(coupling)
  double upper = 0.0;         // log(mu(Omega) nu(Delta))
  double mass_bound = 0.0;    // (mu(Omega) nu(Delta))^(-1/p)
  double slack_lower = 0.0;   // entropy_sum - lower
  double slack_upper = 0.0;   // upper - entropy_sum
  double slack_mass = 0.0;    // coupling - mass_bound
  double tolerance = kOneBoundedSlack;
  bool lower_pass = true;
  bool upper_pass = true;
  bool mass_pass = true;

  bool passed() const { return lower_pass && upper_pass && mass_pass; }
};

/// Entropy bound and mass inequality for two functional p-frames at x.
PBoundReport verify_fds(const PFrameFunctionals& a, const PFrameFunctionals& b, const Vector& x,
                        const OptimizerConfig& cfg, double tol = 1e-9);
/// Same for two vector p-frames (frames for X*) at the functional f.
PBoundReport verify_dual_fds(const PFrameVectors& a, const PFrameVectors& b, const Vector& f,
                             const OptimizerConfig& cfg, double tol = 1e-9);

/// Variant reusing a coupling value computed once for the pair.
PBoundReport verify_fds_with_coupling(const PFrameBase& a, const PFrameBase& b, const Vector& x,
                                      double coupling, double tol);

struct PBatchReport {
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  CouplingResult coupling;
  std::size_t failures = 0;
  std::size_t hypothesis_not_met = 0;
  double min_slack_lower = 0.0;
  double min_slack_upper = 0.0;
  double slack_mass = 0.0;
  std::size_t worst_index = 0;
  PBoundReport worst;
};

PBatchReport verify_p_batch(const PFrameBase& a, const PFrameBase& b, std::size_t n_samples,
                            const OptimizerConfig& cfg, double tol = 1e-9);

void to_json(nlohmann::json& j, const PFrameBase& f);
/// Reads either role; the caller inspects role().
PFrameBase pframe_from_json(const nlohmann::json& j);
PFrameFunctionals as_functionals(const PFrameBase& f);
PFrameVectors as_vectors(const PFrameBase& f);

void to_json(nlohmann::json& j, const CouplingResult& c);
void to_json(nlohmann::json& j, const PBoundReport& r);
void to_json(nlohmann::json& j, const PBatchReport& r);

}  // namespace entroframe
