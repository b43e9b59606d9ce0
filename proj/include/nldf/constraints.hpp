#pragma once

#include <optional>
#include <span>
#include <vector>

#include "nldf/graph.hpp"

namespace nldf {

/// lo <= w_e * (x_a - x_b) <= hi on a single edge.
struct SlopeBound {
  std::size_t edge = 0;
  double lo = 0.0;
  double hi = 0.0;
};

/// Effective domain of a catalog functional, written as a node box plus
/// weighted-difference slabs. Every catalog domain has this shape.
class DomainConstraints {
 public:
  explicit DomainConstraints(std::size_t n);

  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<SlopeBound> slopes;

  std::size_t size() const { return lower.size(); }
  void intersect_box(double lo, double hi);
  void intersect(const DomainConstraints& other);
  bool has_slopes() const { return !slopes.empty(); }
  bool has_box() const;
  bool unconstrained() const { return !has_box() && !has_slopes(); }

  /// Constraints on u such that (u - shift) / scale lies in this domain.
  /// An empty shift means zero.
  DomainConstraints preimage(const MeasuredGraph& g, double scale, std::span<const double> shift = {}) const;

  bool box_empty() const;
  void project_box(std::span<double> x) const;
  bool contains(const MeasuredGraph& g, std::span<const double> x, double tol) const;

  /// sup { t >= 0 : t x in domain } for a domain that contains 0.
  double ray_limit(const MeasuredGraph& g, std::span<const double> x) const;

  /// Pointwise least element of the domain, if it exists.
  std::optional<std::vector<double>> least_element(const MeasuredGraph& g) const;
};

}  // namespace nldf
