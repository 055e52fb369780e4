#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace entroframe {

using Scalar = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Scalar field K of the underlying space.
enum class Field { Real, Complex };

std::string to_string(Field f);
Field field_from_string(const std::string& s);

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnsupportedRefinement : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised when an analytic gradient hits a vanishing coefficient.
class PerturbationRequired : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Magnitude below which a coefficient is treated as an exact zero.
inline constexpr double kExactZero = 1e-300;

/// Slack allowed on ||tau|| <= 1 before a family counts as not 1-bounded.
inline constexpr double kOneBoundedSlack = 1e-12;

/// Compensated (Neumaier) summation.
double stable_sum(std::span<const double> xs);

/// splitmix64 step; used to derive independent per-task seeds from a master seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

using Rng = std::mt19937_64;

/// Gaussian vector normalized in the Euclidean norm. Real field draws real entries only.
Vector random_unit_vector(Rng& rng, Eigen::Index dim, Field field);

/// Gaussian vector normalized in the l^p norm.
Vector random_unit_vector_p(Rng& rng, Eigen::Index dim, Field field, double p);

double lp_norm(const Vector& x, double p);

/// Conjugate exponent; returns +inf for p == 1.
double conjugate_exponent(double p);

/// FNV-1a 64-bit hash, printed as 16 hex digits.
std::string fnv1a_hex(const std::string& data);

}  // namespace entroframe
