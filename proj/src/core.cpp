#include "entroframe/core.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace entroframe {

std::string to_string(Field f) { return f == Field::Real ? "R" : "C"; }

Field field_from_string(const std::string& s) {
  if (s == "R" || s == "real") return Field::Real;
  if (s == "C" || s == "complex") return Field::Complex;
  throw InvalidArgument("unknown scalar field '" + s + "' (expected R or C)");
}

double stable_sum(std::span<const double> xs) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

Vector gaussian_vector(Rng& rng, Eigen::Index dim, Field field) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double re = normal(rng);
    const double im = field == Field::Complex ? normal(rng) : 0.0;
    v[i] = Scalar(re, im);
  }
  return v;
}

}  // namespace

Vector random_unit_vector(Rng& rng, Eigen::Index dim, Field field) {
  for (;;) {
    Vector v = gaussian_vector(rng, dim, field);
    const double n = v.norm();
    if (n > 0.0) return v / n;
  }
}

Vector random_unit_vector_p(Rng& rng, Eigen::Index dim, Field field, double p) {
  for (;;) {
    Vector v = gaussian_vector(rng, dim, field);
    const double n = lp_norm(v, p);
    if (n > 0.0) return v / n;
  }
}

double lp_norm(const Vector& x, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& z : x) m = std::max(m, std::abs(z));
    return m;
  }
  if (p == 2.0) return x.norm();
  double m = 0.0;
  for (const auto& z : x) m = std::max(m, std::abs(z));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (const auto& z : x) s += std::pow(std::abs(z) / m, p);
  return m * std::pow(s, 1.0 / p);
}

double conjugate_exponent(double p) {
  if (p < 1.0) throw InvalidArgument("exponent p must be >= 1");
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  return p / (p - 1.0);
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace entroframe
