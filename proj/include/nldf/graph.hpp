#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "nldf/ext_real.hpp"

namespace nldf {

struct Edge {
  std::size_t a = 0;
  std::size_t b = 0;
  double weight = 1.0;
};

/// Finite measure space (X, m) with a weighted undirected edge set.
///
/// Edges are stored in canonical orientation (a < b), sorted by (a, b).
/// Every node carries strictly positive mass. Immutable after construction.
class MeasuredGraph {
 public:
  MeasuredGraph(std::vector<double> measure, std::vector<Edge> edges,
                std::size_t neighborhood_radius = 0);

  std::size_t node_count() const { return measure_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const double> measure() const { return measure_; }
  double measure(std::size_t i) const { return measure_[i]; }
  std::span<const Edge> edges() const { return edges_; }
  std::size_t neighborhood_radius() const { return neighborhood_radius_; }
  double total_mass() const;
  double min_measure() const;

  /// Mass of a node subset.
  double mass_of(std::span<const std::size_t> nodes) const;

  /// Nodes within hop distance `radius` of `nodes`, sorted ascending.
  std::vector<std::size_t> hull(std::span<const std::size_t> nodes, std::size_t radius) const;

  std::span<const std::size_t> neighbors(std::size_t i) const;

 private:
  std::vector<double> measure_;
  std::vector<Edge> edges_;
  std::size_t neighborhood_radius_;
  std::vector<std::size_t> adj_offsets_;
  std::vector<std::size_t> adj_;
};

using GraphPtr = std::shared_ptr<const MeasuredGraph>;

/// Real value per node; an element of L^2(X, m). Entries are finite.
class FunctionVector {
 public:
  FunctionVector() = default;
  explicit FunctionVector(std::vector<double> values);
  static FunctionVector zeros(std::size_t n) { return FunctionVector(std::vector<double>(n, 0.0)); }
  static FunctionVector constant(std::size_t n, double c) {
    return FunctionVector(std::vector<double>(n, c));
  }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  const std::vector<double>& vec() const { return values_; }

  double sup_norm() const;
  bool is_zero() const;

  friend FunctionVector operator+(const FunctionVector& a, const FunctionVector& b);
  friend FunctionVector operator-(const FunctionVector& a, const FunctionVector& b);
  friend FunctionVector operator-(const FunctionVector& a);
  friend FunctionVector operator*(double s, const FunctionVector& a);
  friend bool operator==(const FunctionVector&, const FunctionVector&) = default;

 private:
  std::vector<double> values_;
};

void require_same_size(const MeasuredGraph& g, std::span<const double> u);
void require_same_size(const FunctionVector& u, const FunctionVector& v);

/// (sum_i m(i) u(i)^2)^(1/2)
double l2_norm(const MeasuredGraph& g, std::span<const double> u);
inline double l2_norm(const MeasuredGraph& g, const FunctionVector& u) { return l2_norm(g, u.values()); }
double l2_norm_squared(const MeasuredGraph& g, std::span<const double> u);

FunctionVector lattice_min(const FunctionVector& u, const FunctionVector& v);
FunctionVector lattice_max(const FunctionVector& u, const FunctionVector& v);

/// Pointwise clamp to [-c, c].
FunctionVector truncate(const FunctionVector& u, double c);

/// 1/2 ((u - v + alpha)_+ - (u - v - alpha)_-), with y_- = max(-y, 0).
FunctionVector stieltjes_midpoint(const FunctionVector& u, const FunctionVector& v, double alpha);

inline double positive_part(double x) { return x > 0.0 ? x : 0.0; }
inline double negative_part(double x) { return x < 0.0 ? -x : 0.0; }

/// Indicator vector of a node subset.
FunctionVector indicator(std::size_t n, std::span<const std::size_t> nodes);

}  // namespace nldf
