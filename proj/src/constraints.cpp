#include "nldf/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nldf {

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();
}

DomainConstraints::DomainConstraints(std::size_t n) : lower(n, -inf), upper(n, inf) {}

void DomainConstraints::intersect_box(double lo, double hi) {
  for (auto& l : lower) l = std::max(l, lo);
  for (auto& h : upper) h = std::min(h, hi);
}

void DomainConstraints::intersect(const DomainConstraints& other) {
  if (other.size() != size()) throw InputError("constraint dimension mismatch");
  for (std::size_t i = 0; i < size(); ++i) {
    lower[i] = std::max(lower[i], other.lower[i]);
    upper[i] = std::min(upper[i], other.upper[i]);
  }
  slopes.insert(slopes.end(), other.slopes.begin(), other.slopes.end());
}

bool DomainConstraints::has_box() const {
  for (std::size_t i = 0; i < size(); ++i)
    if (lower[i] > -inf || upper[i] < inf) return true;
  return false;
}

DomainConstraints DomainConstraints::preimage(const MeasuredGraph& g, double scale,
                                              std::span<const double> shift) const {
  DomainConstraints out(size());
  auto at = [&](std::size_t i) { return shift.empty() ? 0.0 : shift[i]; };
  for (std::size_t i = 0; i < size(); ++i) {
    out.lower[i] = lower[i] == -inf ? -inf : at(i) + scale * lower[i];
    out.upper[i] = upper[i] == inf ? inf : at(i) + scale * upper[i];
  }
  auto edges = g.edges();
  for (const auto& s : slopes) {
    const auto& e = edges[s.edge];
    const double c = e.weight * (at(e.a) - at(e.b));
    out.slopes.push_back({s.edge, s.lo == -inf ? -inf : c + scale * s.lo, s.hi == inf ? inf : c + scale * s.hi});
  }
  return out;
}

bool DomainConstraints::box_empty() const {
  for (std::size_t i = 0; i < size(); ++i)
    if (lower[i] > upper[i]) return true;
  return false;
}

void DomainConstraints::project_box(std::span<double> x) const {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
}

bool DomainConstraints::contains(const MeasuredGraph& g, std::span<const double> x, double tol) const {
  for (std::size_t i = 0; i < size(); ++i)
    if (x[i] < lower[i] - tol || x[i] > upper[i] + tol) return false;
  auto edges = g.edges();
  for (const auto& s : slopes) {
    const auto& e = edges[s.edge];
    const double d = e.weight * (x[e.a] - x[e.b]);
    if (d < s.lo - tol || d > s.hi + tol) return false;
  }
  return true;
}

double DomainConstraints::ray_limit(const MeasuredGraph& g, std::span<const double> x) const {
  double t = inf;
  auto limit = [&t](double v, double lo, double hi) {
    if (v > 0.0 && hi < inf) t = std::min(t, hi / v);
    if (v < 0.0 && lo > -inf) t = std::min(t, lo / v);
  };
  for (std::size_t i = 0; i < size(); ++i) limit(x[i], lower[i], upper[i]);
  auto edges = g.edges();
  for (const auto& s : slopes) {
    const auto& e = edges[s.edge];
    limit(e.weight * (x[e.a] - x[e.b]), s.lo, s.hi);
  }
  return std::max(t, 0.0);
}

std::optional<std::vector<double>> DomainConstraints::least_element(const MeasuredGraph& g) const {
  std::vector<double> x = lower;
  auto edges = g.edges();
  const std::size_t n = size();
  // Longest-path relaxation: x_a >= x_b + lo/w and x_b >= x_a - hi/w.
  bool changed = true;
  for (std::size_t pass = 0; changed && pass <= n + 1; ++pass) {
    changed = false;
    for (const auto& s : slopes) {
      const auto& e = edges[s.edge];
      if (s.lo > -inf) {
        const double need = x[e.b] + s.lo / e.weight;
        if (need > x[e.a] + 1e-15 * std::max(1.0, std::abs(need))) {
          x[e.a] = need;
          changed = true;
        }
      }
      if (s.hi < inf) {
        const double need = x[e.a] - s.hi / e.weight;
        if (need > x[e.b] + 1e-15 * std::max(1.0, std::abs(need))) {
          x[e.b] = need;
          changed = true;
        }
      }
    }
  }
  if (changed) return std::nullopt;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == -inf) return std::nullopt;
    if (x[i] > upper[i] + 1e-12) return std::nullopt;
    x[i] = std::min(x[i], upper[i]);
  }
  return x;
}

}  // namespace nldf
