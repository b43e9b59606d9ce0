#pragma once

#include <vector>

#include "nldf/graph.hpp"
#include "nldf/sampling.hpp"

namespace nldf {

/// Piecewise-linear normal contraction: slopes in [0, 1] between sorted
/// breakpoints, pinned by p(0) = 0. With k breakpoints there are k + 1
/// slopes; slopes[i] holds on (breakpoints[i-1], breakpoints[i]).
class NormalContraction {
 public:
  NormalContraction(std::vector<double> breakpoints, std::vector<double> slopes);

  static NormalContraction linear(double slope);
  static NormalContraction identity() { return linear(1.0); }
  static NormalContraction zero() { return linear(0.0); }
  static NormalContraction positive_part();
  // (-c) v x ^ c
  static NormalContraction clamp(double c);
  // x -> (1/2)((x + alpha)_+ - (x - alpha)_-)
  static NormalContraction truncation_midpoint(double alpha);

  double operator()(double x) const;
  FunctionVector apply(const FunctionVector& u) const;

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& slopes() const { return slopes_; }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> slopes_;
};

/// 1-8 breakpoints uniform in [-range, range], slopes uniform in [0, 1].
NormalContraction sample_normal_contraction(Rng& rng, double range);

}  // namespace nldf
