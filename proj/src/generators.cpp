#include "nldf/generators.hpp"

#include <cmath>

namespace nldf {

namespace {
void check_mesh(double mesh, double p) {
  if (!(mesh > 0.0) || !std::isfinite(mesh)) throw InputError("mesh must be positive and finite");
  if (!(p >= 1.0) || !std::isfinite(p)) throw InputError("exponent p must be >= 1");
}
}  // namespace

MeasuredGraph path_graph(std::size_t n, double mesh, double p) {
  if (n < 2) throw InputError("path needs n >= 2");
  check_mesh(mesh, p);
  const double w = std::pow(mesh, 1.0 - p);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, w});
  return MeasuredGraph(std::vector<double>(n, mesh), std::move(edges));
}

MeasuredGraph grid_graph(std::size_t n, std::size_t m, double mesh, double p) {
  if (n < 2 || m < 2) throw InputError("grid needs n, m >= 2");
  check_mesh(mesh, p);
  const double w = std::pow(mesh, 2.0 - p);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t id = i * m + j;
      if (j + 1 < m) edges.push_back({id, id + 1, w});
      if (i + 1 < n) edges.push_back({id, id + m, w});
    }
  return MeasuredGraph(std::vector<double>(n * m, mesh * mesh), std::move(edges));
}

MeasuredGraph path_from_positions(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 2) throw InputError("path needs n >= 2");
  std::vector<double> measure(n, 0.0);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double len = x[i + 1] - x[i];
    if (!(len > 0.0)) throw InputError("positions must increase strictly");
    measure[i] += 0.5 * len;
    measure[i + 1] += 0.5 * len;
    edges.push_back({i, i + 1, 1.0 / len});
  }
  return MeasuredGraph(std::move(measure), std::move(edges));
}

}  // namespace nldf
