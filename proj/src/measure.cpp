#include "entroframe/measure.hpp"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "entroframe/core.hpp"

namespace entroframe {

std::string to_string(MeasureKind k) {
  switch (k) {
    case MeasureKind::Counting: return "counting";
    case MeasureKind::Circle: return "circle";
    case MeasureKind::Interval: return "interval";
  }
  return "counting";
}

MeasureKind measure_kind_from_string(const std::string& s) {
  if (s == "counting") return MeasureKind::Counting;
  if (s == "circle") return MeasureKind::Circle;
  if (s == "interval") return MeasureKind::Interval;
  throw InvalidArgument("unknown measure kind '" + s + "'");
}

DiscreteMeasure::DiscreteMeasure(MeasureKind kind, std::vector<double> atoms,
                                 std::vector<double> weights)
    : kind_(kind), atoms_(std::move(atoms)), weights_(std::move(weights)) {
  if (atoms_.empty()) throw InvalidArgument("measure needs at least one atom");
  if (atoms_.size() != weights_.size())
    throw InvalidArgument("atoms and weights differ in length");
  for (double w : weights_)
    if (!(w > 0.0) || !std::isfinite(w))
      throw InvalidArgument("measure weights must be positive and finite");
  total_mass_ = stable_sum(weights_);
}

DiscreteMeasure DiscreteMeasure::counting(std::size_t n) {
  if (n == 0) throw InvalidArgument("counting measure needs n >= 1");
  std::vector<double> atoms(n);
  for (std::size_t i = 0; i < n; ++i) atoms[i] = static_cast<double>(i);
  return {MeasureKind::Counting, std::move(atoms), std::vector<double>(n, 1.0)};
}

DiscreteMeasure DiscreteMeasure::uniform_circle(std::size_t n, double offset) {
  if (n < 2) throw InvalidArgument("circle quadrature needs n >= 2");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> atoms(n);
  for (std::size_t k = 0; k < n; ++k)
    atoms[k] = offset + two_pi * static_cast<double>(k) / static_cast<double>(n);
  return {MeasureKind::Circle, std::move(atoms),
          std::vector<double>(n, two_pi / static_cast<double>(n))};
}

DiscreteMeasure DiscreteMeasure::midpoint_interval(double lo, double hi, std::size_t n) {
  if (n < 1) throw InvalidArgument("interval quadrature needs n >= 1");
  if (!(hi > lo)) throw InvalidArgument("interval needs lo < hi");
  const double width = (hi - lo) / static_cast<double>(n);
  std::vector<double> atoms(n);
  for (std::size_t k = 0; k < n; ++k)
    atoms[k] = lo + (static_cast<double>(k) + 0.5) * width;
  return {MeasureKind::Interval, std::move(atoms), std::vector<double>(n, width)};
}

double DiscreteMeasure::domain_start() const {
  switch (kind_) {
    case MeasureKind::Circle: return atoms_.front();
    case MeasureKind::Interval: return atoms_.front() - 0.5 * weights_.front();
    case MeasureKind::Counting: return 0.0;
  }
  return 0.0;
}

DiscreteMeasure refine(const DiscreteMeasure& m, std::size_t factor) {
  if (factor < 1) throw InvalidArgument("refinement factor must be >= 1");
  switch (m.kind()) {
    case MeasureKind::Counting:
      throw UnsupportedRefinement("counting measures cannot be refined");
    case MeasureKind::Circle:
      if (factor == 1) return m;
      return DiscreteMeasure::uniform_circle(m.size() * factor, m.domain_start());
    case MeasureKind::Interval: {
      if (factor == 1) return m;
      const double lo = m.domain_start();
      return DiscreteMeasure::midpoint_interval(lo, lo + m.total_mass(), m.size() * factor);
    }
  }
  throw UnsupportedRefinement("unknown measure kind");
}

void to_json(nlohmann::json& j, const DiscreteMeasure& m) {
  j = nlohmann::json{{"kind", to_string(m.kind())}, {"atoms", m.atoms()}, {"weights", m.weights()}};
}

DiscreteMeasure measure_from_json(const nlohmann::json& j) {
  try {
    return DiscreteMeasure(measure_kind_from_string(j.at("kind").get<std::string>()),
                           j.at("atoms").get<std::vector<double>>(),
                           j.at("weights").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed measure: ") + e.what());
  }
}

}  // namespace entroframe
