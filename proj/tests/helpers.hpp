#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "nldf/generators.hpp"
#include "nldf/graph.hpp"

namespace testing {

inline nldf::GraphPtr share(nldf::MeasuredGraph g) { return std::make_shared<const nldf::MeasuredGraph>(std::move(g)); }

// Graph with unit measure and unit weights along a path.
inline nldf::GraphPtr unit_path(std::size_t n) { return share(nldf::path_graph(n, 1.0)); }

inline nldf::GraphPtr measured(std::vector<double> m, std::vector<nldf::Edge> e = {}) {
  return share(nldf::MeasuredGraph(std::move(m), std::move(e)));
}

inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace testing
