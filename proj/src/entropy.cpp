#include "entroframe/entropy.hpp"

#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

namespace entroframe {

std::pair<double, std::size_t> weighted_entropy(const DiscreteMeasure& m, std::span<const double> q) {
  std::vector<double> terms;
  terms.reserve(q.size());
  std::size_t masked = 0;
  for (std::size_t a = 0; a < q.size(); ++a) {
    if (q[a] == 0.0) {
      ++masked;
      continue;
    }
    terms.push_back(-m.weight(a) * q[a] * std::log(q[a]));
  }
  return {stable_sum(terms), masked};
}

long double weighted_entropy_extended(const DiscreteMeasure& m, std::span<const long double> q) {
  long double sum = 0.0L;
  for (std::size_t a = 0; a < q.size(); ++a)
    if (q[a] != 0.0L) sum -= static_cast<long double>(m.weight(a)) * q[a] * std::log(q[a]);
  return sum;
}

namespace {

void require_nonzero(const Vector& h) {
  if (h.size() == 0 || h.norm() == 0.0) throw InvalidArgument("entropy is undefined at h = 0");
}

double plain_entropy(const FrameFamily& f, const Vector& u, std::size_t& masked) {
  const CoefficientFamily c = analysis(f, u);
  std::vector<double> p(static_cast<std::size_t>(c.values.size()));
  for (Eigen::Index a = 0; a < c.values.size(); ++a)
    p[static_cast<std::size_t>(a)] = std::abs(c.values[a]) < kExactZero ? 0.0 : std::norm(c.values[a]);
  auto [value, m] = weighted_entropy(f.measure(), p);
  masked = m;
  return value;
}

}  // namespace

EntropyValue shannon_entropy(const FrameFamily& f, const Vector& h, bool with_quadrature_hint) {
  require_nonzero(h);
  const Vector u = h / h.norm();
  EntropyValue out;
  out.value = plain_entropy(f, u, out.masked_atoms);
  out.in_domain = out.masked_atoms == 0;
  out.one_bounded = is_one_bounded(f);
  if (with_quadrature_hint) {
    if (auto coarse = coarsen_frame(f, 2)) {
      std::size_t unused = 0;
      out.quadrature_error_hint = std::abs(out.value - plain_entropy(*coarse, u, unused));
    }
  }
  return out;
}

long double shannon_entropy_extended(const FrameFamily& f, const Vector& h) {
  require_nonzero(h);
  using ld = long double;
  using cld = std::complex<long double>;
  ld norm2 = 0.0L;
  for (const auto& z : h) norm2 += static_cast<ld>(std::norm(z));
  const ld norm = std::sqrt(norm2);
  std::vector<ld> p(f.size());
  for (std::size_t a = 0; a < f.size(); ++a) {
    cld s = 0.0L;
    for (Eigen::Index i = 0; i < f.dim(); ++i) {
      const Scalar t = f.vectors()(i, static_cast<Eigen::Index>(a));
      s += cld(h[i].real(), h[i].imag()) * std::conj(cld(t.real(), t.imag()));
    }
    s /= norm;
    p[a] = std::abs(s) < kExactZero ? 0.0L : std::norm(s);
  }
  return weighted_entropy_extended(f.measure(), p);
}

EntropyPair entropy_sum(const FrameFamily& f, const FrameFamily& g, const Vector& h,
                        bool with_quadrature_hint) {
  if (f.dim() != g.dim())
    throw InvalidArgument("entropy_sum: dimension mismatch (" + std::to_string(f.dim()) + " vs " +
                          std::to_string(g.dim()) + ")");
  EntropyPair out;
  out.first = shannon_entropy(f, h, with_quadrature_hint);
  out.second = shannon_entropy(g, h, with_quadrature_hint);
  out.sum = out.first.value + out.second.value;
  out.in_domain = out.first.in_domain && out.second.in_domain;
  return out;
}

void to_json(nlohmann::json& j, const EntropyValue& e) {
  j = nlohmann::json{{"value", e.value},
                     {"in_domain", e.in_domain},
                     {"masked_atoms", e.masked_atoms},
                     {"one_bounded", e.one_bounded}};
  if (e.quadrature_error_hint)
    j["quadrature_error_hint"] = *e.quadrature_error_hint;
  else
    j["quadrature_error_hint"] = nullptr;
}

}  // namespace entroframe
