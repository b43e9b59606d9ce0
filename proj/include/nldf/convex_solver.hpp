#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "nldf/constraints.hpp"
#include "nldf/ext_real.hpp"

namespace nldf {

/// Convex objective phi on a box, strongly convex in the weighted sense
///   phi(y) >= phi(x) + <s, y - x> + sum_i kappa_i (y_i - x_i)^2
/// for every subgradient s at x. The weights kappa also precondition steps.
struct BoxObjective {
  std::function<ExtReal(std::span<const double>)> value;
  std::function<void(std::span<const double>, std::span<double>)> subgradient;
  std::vector<double> kappa;
  bool smooth = true;
  // Optional smoothing family for nonsmooth objectives. smoothed(x, mu, out)
  // returns (phi_mu(x), psi(x)) and adds grad phi_mu(x) to out, where
  //   phi(y) >= psi(x) + <grad phi_mu(x), y - x> + sum kappa (y - x)^2
  // holds on the box.
  std::function<std::pair<double, double>(std::span<const double>, double, std::span<double>)> smoothed;
};

struct DescentSettings {
  std::size_t max_iterations = 20000;
  double tolerance = 1e-12;  // relative certified gap phi(x) - lower_bound
  std::size_t bound_every = 10;
  double mu_start = 1e-2;  // smoothing continuation, divided by 10 per stage
  double mu_min = 1e-13;
};

struct DescentResult {
  std::vector<double> x;
  double value = 0.0;
  double lower_bound = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  bool stopped_early = false;
};

/// Certified lower bound on min_{box} phi from a point x and a subgradient g.
double strong_convexity_bound(double phi_x, std::span<const double> x, std::span<const double> g,
                              std::span<const double> kappa, const DomainConstraints& box);

/// Minimizes phi over the node box of `box` (slopes are ignored).
/// Smooth objectives use accelerated projected gradient with backtracking and
/// function-value restart. Nonsmooth objectives with a smoothing family run
/// the same method on phi_mu with mu decreasing; without one they fall back
/// to projected subgradient steps of size c / sqrt(k). Lower bounds are
/// certified in every case. `stop(value, lower_bound)` may end the run early.
DescentResult minimize_on_box(const BoxObjective& phi, const DomainConstraints& box, std::vector<double> x0,
                              const DescentSettings& settings,
                              const std::function<bool(double, double)>& stop = {});

}  // namespace nldf
