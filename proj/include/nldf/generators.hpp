#pragma once

#include <cstddef>
#include <vector>

#include "nldf/graph.hpp"

namespace nldf {

// Finite-difference discretizations so that (1/p) sum_e w_e |du|^p
// approximates (1/p) int |grad u|^p.

/// Path P_n: node measure `mesh`, edge weight mesh^(1-p).
MeasuredGraph path_graph(std::size_t n, double mesh, double p = 2.0);

/// n x m grid, node (i, j) has id i*m + j; node measure mesh^2, edge weight
/// mesh^(2-p).
MeasuredGraph grid_graph(std::size_t n, std::size_t m, double mesh, double p = 2.0);

/// Path through increasing positions x_0 < ... < x_{n-1}: dual-cell
/// (trapezoid) node measures and edge weights 1 / (x_{i+1} - x_i), the
/// reciprocal length read by the Lipschitz indicator.
MeasuredGraph path_from_positions(const std::vector<double>& x);

}  // namespace nldf
