#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace entroframe {

enum class MeasureKind { Counting, Circle, Interval };

std::string to_string(MeasureKind k);
MeasureKind measure_kind_from_string(const std::string& s);

/// A measure space (Omega, mu) represented by finitely many weighted atoms.
///
/// Atom labels are the real parameter of each node (the angle for circle
/// measures, the midpoint for interval measures, the index for counting
/// measures). All cross-module indexing is positional. Immutable.
class DiscreteMeasure {
 public:
  /// Validates equal lengths, at least one atom and strictly positive finite weights.
  DiscreteMeasure(MeasureKind kind, std::vector<double> atoms, std::vector<double> weights);

  static DiscreteMeasure counting(std::size_t n);
  /// Equispaced nodes offset + 2*pi*k/n with equal weights 2*pi/n.
  static DiscreteMeasure uniform_circle(std::size_t n, double offset = 0.0);
  /// Midpoint rule on [lo, hi].
  static DiscreteMeasure midpoint_interval(double lo, double hi, std::size_t n);

  MeasureKind kind() const { return kind_; }
  std::size_t size() const { return atoms_.size(); }
  const std::vector<double>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }
  double weight(std::size_t i) const { return weights_[i]; }
  double total_mass() const { return total_mass_; }

  /// Left end of the parameter domain (circle offset or interval lower bound).
  double domain_start() const;

  bool operator==(const DiscreteMeasure&) const = default;

 private:
  MeasureKind kind_;
  std::vector<double> atoms_;
  std::vector<double> weights_;
  double total_mass_;
};

/// Same domain, node count multiplied by factor. Circle and interval only.
DiscreteMeasure refine(const DiscreteMeasure& m, std::size_t factor);

void to_json(nlohmann::json& j, const DiscreteMeasure& m);
DiscreteMeasure measure_from_json(const nlohmann::json& j);

}  // namespace entroframe
