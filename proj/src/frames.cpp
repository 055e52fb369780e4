#include "entroframe/frames.hpp"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

namespace entroframe {

namespace {

/// (cos, sin) of offset + 2 pi k / n, exact at quarter turns when offset is zero.
std::pair<double, double> unit_root(std::size_t k, std::size_t n, double offset) {
  k %= n;
  if (offset == 0.0 && (4 * k) % n == 0) {
    switch ((4 * k) / n) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double theta = offset + 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
  return {std::cos(theta), std::sin(theta)};
}

bool has_imaginary_part(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (m(i, j).imag() != 0.0) return true;
  return false;
}

}  // namespace

FrameFamily::FrameFamily(Field field, Matrix vectors,
                         std::shared_ptr<const DiscreteMeasure> measure,
                         std::optional<FrameOrigin> origin)
    : field_(field), vectors_(std::move(vectors)), measure_(std::move(measure)),
      origin_(std::move(origin)) {
  if (!measure_) throw InvalidArgument("frame needs a measure");
  if (vectors_.rows() < 1) throw InvalidArgument("frame dimension must be >= 1");
  if (static_cast<std::size_t>(vectors_.cols()) != measure_->size())
    throw InvalidArgument("frame has " + std::to_string(vectors_.cols()) + " vectors but measure has " +
                          std::to_string(measure_->size()) + " atoms");
  if (field_ == Field::Real && has_imaginary_part(vectors_))
    throw InvalidArgument("real frame has complex entries");
  if (!vectors_.allFinite()) throw InvalidArgument("frame vectors must be finite");
}

double CoefficientFamily::energy() const {
  std::vector<double> terms(static_cast<std::size_t>(values.size()));
  for (Eigen::Index a = 0; a < values.size(); ++a)
    terms[static_cast<std::size_t>(a)] = measure->weight(static_cast<std::size_t>(a)) * std::norm(values[a]);
  return stable_sum(terms);
}

Matrix frame_operator(const FrameFamily& f) {
  const auto& w = f.measure().weights();
  Eigen::VectorXd sw(static_cast<Eigen::Index>(w.size()));
  for (std::size_t a = 0; a < w.size(); ++a) sw[static_cast<Eigen::Index>(a)] = std::sqrt(w[a]);
  const Matrix scaled = f.vectors() * sw.asDiagonal();
  return scaled * scaled.adjoint();
}

double parseval_defect(const FrameFamily& f) {
  return (frame_operator(f) - Matrix::Identity(f.dim(), f.dim())).norm();
}

double one_bounded_excess(const FrameFamily& f) {
  return f.vectors().colwise().norm().maxCoeff() - 1.0;
}

double coherence(const FrameFamily& f, const FrameFamily& g) {
  if (f.dim() != g.dim())
    throw InvalidArgument("coherence: dimension mismatch (" + std::to_string(f.dim()) + " vs " +
                          std::to_string(g.dim()) + ")");
  const Matrix& a = f.vectors();
  const Matrix& b = g.vectors();
  const Eigen::Index d = f.dim();
  double best = 0.0;
  // Explicit loops keep the summation order fixed so coherence(f, g) == coherence(g, f).
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      Scalar s = 0.0;
      for (Eigen::Index k = 0; k < d; ++k) s += a(k, i) * std::conj(b(k, j));
      best = std::max(best, std::abs(s));
    }
  }
  return best;
}

std::optional<double> coherence_extrapolated(const FrameFamily& f, const FrameFamily& g) {
  if (!f.refinable() || !g.refinable()) return std::nullopt;
  const double c2 = coherence(refine_frame(f, 2), refine_frame(g, 2));
  const double c4 = coherence(refine_frame(f, 4), refine_frame(g, 4));
  return c4 + (c4 - c2) / 3.0;
}

CoefficientFamily analysis(const FrameFamily& f, const Vector& h) {
  if (h.size() != f.dim())
    throw InvalidArgument("analysis: vector has dimension " + std::to_string(h.size()) +
                          ", frame has " + std::to_string(f.dim()));
  CoefficientFamily out;
  out.values = f.vectors().adjoint() * h;
  out.measure = f.measure_ptr();
  for (Eigen::Index a = 0; a < out.values.size(); ++a)
    if (std::abs(out.values[a]) < kExactZero) out.zero_mask.push_back(static_cast<std::size_t>(a));
  return out;
}

FrameFamily make_onb(Eigen::Index d, Field field) {
  if (d < 1) throw InvalidArgument("make_onb: d must be >= 1");
  return {field, Matrix::Identity(d, d),
          std::make_shared<const DiscreteMeasure>(DiscreteMeasure::counting(static_cast<std::size_t>(d)))};
}

FrameFamily make_fourier(Eigen::Index d) {
  if (d < 1) throw InvalidArgument("make_fourier: d must be >= 1");
  const auto n = static_cast<std::size_t>(d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  Matrix v(d, d);
  bool real = true;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      auto [c, s] = unit_root(j * k, n, 0.0);
      v(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = Scalar(c * scale, s * scale);
      if (s != 0.0) real = false;
    }
  }
  return {real ? Field::Real : Field::Complex, std::move(v),
          std::make_shared<const DiscreteMeasure>(DiscreteMeasure::counting(n))};
}

FrameFamily make_circle_frame(std::size_t n, double offset) {
  auto m = std::make_shared<const DiscreteMeasure>(DiscreteMeasure::uniform_circle(n, offset));
  const double scale = 1.0 / std::sqrt(std::numbers::pi);
  Matrix v(2, static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    auto [c, s] = unit_root(k, n, offset);
    v(0, static_cast<Eigen::Index>(k)) = c * scale;
    v(1, static_cast<Eigen::Index>(k)) = s * scale;
  }
  return {Field::Real, std::move(v), std::move(m), FrameOrigin{"circle", offset}};
}

FrameFamily make_mercedes() {
  const double r = std::sqrt(2.0 / 3.0);
  Matrix v(2, 3);
  for (std::size_t k = 0; k < 3; ++k) {
    auto [c, s] = unit_root(k, 3, 0.0);
    v(0, static_cast<Eigen::Index>(k)) = r * c;
    v(1, static_cast<Eigen::Index>(k)) = r * s;
  }
  return {Field::Real, std::move(v), std::make_shared<const DiscreteMeasure>(DiscreteMeasure::counting(3))};
}

FrameFamily make_random_parseval(Eigen::Index d, std::size_t n, std::uint64_t seed, Field field) {
  if (d < 1) throw InvalidArgument("make_random_parseval: d must be >= 1");
  if (static_cast<std::size_t>(d) > n)
    throw InvalidArgument("make_random_parseval: need d <= n (got d=" + std::to_string(d) +
                          ", n=" + std::to_string(n) + ")");
  Rng rng(mix_seed(seed, 0));
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto nn = static_cast<Eigen::Index>(n);
  Matrix g(nn, nn);
  for (Eigen::Index j = 0; j < nn; ++j)
    for (Eigen::Index i = 0; i < nn; ++i) {
      const double re = normal(rng);
      const double im = field == Field::Complex ? normal(rng) : 0.0;
      g(i, j) = Scalar(re, im);
    }
  Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix q = qr.householderQ() * Matrix::Identity(nn, d);
  // Rows of q are the frame vectors: sum_j tau_j tau_j^* = conj(q^* q) = I.
  Matrix v = q.transpose();
  if (field == Field::Real) v = v.real().cast<Scalar>();
  return {field, std::move(v), std::make_shared<const DiscreteMeasure>(DiscreteMeasure::counting(n))};
}

FrameFamily refine_frame(const FrameFamily& f, std::size_t factor) {
  if (!f.origin()) throw UnsupportedRefinement("frame has no continuous generator; cannot refine");
  if (factor < 1) throw InvalidArgument("refinement factor must be >= 1");
  if (f.origin()->builder == "circle") return make_circle_frame(f.size() * factor, f.origin()->offset);
  throw UnsupportedRefinement("unknown frame builder '" + f.origin()->builder + "'");
}

std::optional<FrameFamily> coarsen_frame(const FrameFamily& f, std::size_t factor) {
  if (!f.origin() || factor < 1 || f.size() % factor != 0) return std::nullopt;
  const std::size_t n = f.size() / factor;
  if (f.origin()->builder == "circle" && n >= 2) return make_circle_frame(n, f.origin()->offset);
  return std::nullopt;
}

void to_json(nlohmann::json& j, const FrameFamily& f) {
  nlohmann::json vecs = nlohmann::json::array();
  for (std::size_t a = 0; a < f.size(); ++a) {
    nlohmann::json v = nlohmann::json::array();
    for (Eigen::Index i = 0; i < f.dim(); ++i) {
      const Scalar z = f.vectors()(i, static_cast<Eigen::Index>(a));
      if (f.field() == Field::Real)
        v.push_back(nlohmann::json::array({z.real()}));
      else
        v.push_back(nlohmann::json::array({z.real(), z.imag()}));
    }
    vecs.push_back(std::move(v));
  }
  j = nlohmann::json{{"field", to_string(f.field())},
                     {"dim", f.dim()},
                     {"measure", f.measure()},
                     {"vectors", std::move(vecs)}};
  if (f.origin()) j["builder"] = {{"name", f.origin()->builder}, {"offset", f.origin()->offset}};
}

namespace {

Scalar scalar_from_json(const nlohmann::json& e, Field field) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (!e.is_array() || e.empty() || e.size() > 2) throw InvalidArgument("frame entry must be [re] or [re, im]");
  const double re = e[0].get<double>();
  const double im = e.size() == 2 ? e[1].get<double>() : 0.0;
  if (field == Field::Real && im != 0.0) throw InvalidArgument("real frame entry has an imaginary part");
  return {re, im};
}

}  // namespace

FrameFamily frame_from_json(const nlohmann::json& j) {
  try {
    const Field field = field_from_string(j.at("field").get<std::string>());
    const auto dim = j.at("dim").get<Eigen::Index>();
    auto measure = std::make_shared<const DiscreteMeasure>(measure_from_json(j.at("measure")));
    const auto& vecs = j.at("vectors");
    if (!vecs.is_array()) throw InvalidArgument("'vectors' must be an array");
    if (dim < 1) throw InvalidArgument("'dim' must be >= 1");
    Matrix v(dim, static_cast<Eigen::Index>(vecs.size()));
    for (std::size_t a = 0; a < vecs.size(); ++a) {
      if (!vecs[a].is_array() || static_cast<Eigen::Index>(vecs[a].size()) != dim)
        throw InvalidArgument("frame vector " + std::to_string(a) + " does not have dim entries");
      for (Eigen::Index i = 0; i < dim; ++i)
        v(i, static_cast<Eigen::Index>(a)) = scalar_from_json(vecs[a][static_cast<std::size_t>(i)], field);
    }
    std::optional<FrameOrigin> origin;
    if (j.contains("builder"))
      origin = FrameOrigin{j["builder"].at("name").get<std::string>(), j["builder"].value("offset", 0.0)};
    return FrameFamily(field, std::move(v), std::move(measure), std::move(origin));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed frame: ") + e.what());
  }
}

FrameSummary summarize(const FrameFamily& f) {
  FrameSummary s;
  s.field = f.field();
  s.dim = f.dim();
  s.atoms = f.size();
  s.kind = f.measure().kind();
  s.total_mass = f.measure().total_mass();
  if (s.kind != MeasureKind::Counting) s.grid_resolution = f.size();
  return s;
}

void to_json(nlohmann::json& j, const FrameSummary& s) {
  j = nlohmann::json{{"field", to_string(s.field)},
                     {"dim", s.dim},
                     {"atoms", s.atoms},
                     {"measure_kind", to_string(s.kind)},
                     {"total_mass", s.total_mass}};
  if (s.grid_resolution)
    j["grid_resolution"] = *s.grid_resolution;
  else
    j["grid_resolution"] = nullptr;
}

}  // namespace entroframe
