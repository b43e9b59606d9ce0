#include "nldf/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

namespace nldf {

MeasuredGraph::MeasuredGraph(std::vector<double> measure, std::vector<Edge> edges,
                             std::size_t neighborhood_radius)
    : measure_(std::move(measure)), edges_(std::move(edges)), neighborhood_radius_(neighborhood_radius) {
  if (measure_.empty()) throw InputError("graph must have at least one node");
  for (std::size_t i = 0; i < measure_.size(); ++i) {
    if (!std::isfinite(measure_[i]) || measure_[i] <= 0.0)
      throw InputError("node " + std::to_string(i) + " has non-positive or non-finite measure");
  }
  const std::size_t n = measure_.size();
  for (auto& e : edges_) {
    if (e.a >= n || e.b >= n) throw InputError("edge endpoint out of range");
    if (e.a == e.b) throw InputError("self-loop at node " + std::to_string(e.a));
    if (!std::isfinite(e.weight) || e.weight <= 0.0)
      throw InputError("edge weight must be finite and positive");
    if (e.a > e.b) std::swap(e.a, e.b);
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& x, const Edge& y) { return x.a != y.a ? x.a < y.a : x.b < y.b; });
  for (std::size_t k = 1; k < edges_.size(); ++k) {
    if (edges_[k].a == edges_[k - 1].a && edges_[k].b == edges_[k - 1].b)
      throw InputError("duplicate edge (" + std::to_string(edges_[k].a) + "," +
                       std::to_string(edges_[k].b) + ")");
  }

  std::vector<std::size_t> degree(n, 0);
  for (const auto& e : edges_) {
    ++degree[e.a];
    ++degree[e.b];
  }
  adj_offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) adj_offsets_[i + 1] = adj_offsets_[i] + degree[i];
  adj_.resize(adj_offsets_[n]);
  std::vector<std::size_t> fill(adj_offsets_.begin(), adj_offsets_.end() - 1);
  for (const auto& e : edges_) {
    adj_[fill[e.a]++] = e.b;
    adj_[fill[e.b]++] = e.a;
  }
}

double MeasuredGraph::total_mass() const {
  double s = 0.0;
  for (double m : measure_) s += m;
  return s;
}

double MeasuredGraph::min_measure() const { return *std::min_element(measure_.begin(), measure_.end()); }

double MeasuredGraph::mass_of(std::span<const std::size_t> nodes) const {
  double s = 0.0;
  for (auto i : nodes) s += measure_.at(i);
  return s;
}

std::span<const std::size_t> MeasuredGraph::neighbors(std::size_t i) const {
  return std::span<const std::size_t>(adj_).subspan(adj_offsets_[i], adj_offsets_[i + 1] - adj_offsets_[i]);
}

std::vector<std::size_t> MeasuredGraph::hull(std::span<const std::size_t> nodes, std::size_t radius) const {
  const std::size_t n = node_count();
  constexpr auto unseen = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(n, unseen);
  std::deque<std::size_t> queue;
  for (auto i : nodes) {
    if (i >= n) throw InputError("set member " + std::to_string(i) + " out of range");
    if (dist[i] == unseen) {
      dist[i] = 0;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    auto i = queue.front();
    queue.pop_front();
    if (dist[i] == radius) continue;
    for (auto j : neighbors(i)) {
      if (dist[j] == unseen) {
        dist[j] = dist[i] + 1;
        queue.push_back(j);
      }
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (dist[i] != unseen) out.push_back(i);
  return out;
}

FunctionVector::FunctionVector(std::vector<double> values) : values_(std::move(values)) {
  for (double x : values_)
    if (!std::isfinite(x)) throw InputError("function vector entries must be finite");
}

double FunctionVector::sup_norm() const {
  double s = 0.0;
  for (double x : values_) s = std::max(s, std::abs(x));
  return s;
}

bool FunctionVector::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return x == 0.0; });
}

void require_same_size(const MeasuredGraph& g, std::span<const double> u) {
  if (u.size() != g.node_count())
    throw InputError("dimension mismatch: vector has " + std::to_string(u.size()) + " entries, graph has " +
                     std::to_string(g.node_count()) + " nodes");
}

void require_same_size(const FunctionVector& u, const FunctionVector& v) {
  if (u.size() != v.size()) throw InputError("dimension mismatch between function vectors");
}

namespace {
template <class Op>
FunctionVector zip(const FunctionVector& u, const FunctionVector& v, Op op) {
  require_same_size(u, v);
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = op(u[i], v[i]);
  return FunctionVector(std::move(out));
}
}  // namespace

FunctionVector operator+(const FunctionVector& a, const FunctionVector& b) {
  return zip(a, b, [](double x, double y) { return x + y; });
}
FunctionVector operator-(const FunctionVector& a, const FunctionVector& b) {
  return zip(a, b, [](double x, double y) { return x - y; });
}
FunctionVector operator-(const FunctionVector& a) { return -1.0 * a; }
FunctionVector operator*(double s, const FunctionVector& a) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
  return FunctionVector(std::move(out));
}

double l2_norm_squared(const MeasuredGraph& g, std::span<const double> u) {
  require_same_size(g, u);
  double s = 0.0;
  auto m = g.measure();
  for (std::size_t i = 0; i < u.size(); ++i) s += m[i] * u[i] * u[i];
  return s;
}

double l2_norm(const MeasuredGraph& g, std::span<const double> u) { return std::sqrt(l2_norm_squared(g, u)); }

FunctionVector lattice_min(const FunctionVector& u, const FunctionVector& v) {
  return zip(u, v, [](double x, double y) { return std::min(x, y); });
}

FunctionVector lattice_max(const FunctionVector& u, const FunctionVector& v) {
  return zip(u, v, [](double x, double y) { return std::max(x, y); });
}

FunctionVector truncate(const FunctionVector& u, double c) {
  if (!(c >= 0.0)) throw InputError("truncation level must be nonnegative");
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::clamp(u[i], -c, c);
  return FunctionVector(std::move(out));
}

FunctionVector stieltjes_midpoint(const FunctionVector& u, const FunctionVector& v, double alpha) {
  if (!(alpha > 0.0)) throw InputError("alpha must be positive");
  return zip(u, v, [alpha](double x, double y) {
    const double d = x - y;
    return 0.5 * (positive_part(d + alpha) - negative_part(d - alpha));
  });
}

FunctionVector indicator(std::size_t n, std::span<const std::size_t> nodes) {
  std::vector<double> out(n, 0.0);
  for (auto i : nodes) out.at(i) = 1.0;
  return FunctionVector(std::move(out));
}

}  // namespace nldf
