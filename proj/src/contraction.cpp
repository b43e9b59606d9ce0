#include "nldf/contraction.hpp"

#include <algorithm>
#include <cmath>

namespace nldf {

NormalContraction::NormalContraction(std::vector<double> breakpoints, std::vector<double> slopes)
    : breakpoints_(std::move(breakpoints)), slopes_(std::move(slopes)) {
  if (slopes_.size() != breakpoints_.size() + 1)
    throw InputError("a contraction with k breakpoints needs k + 1 slopes");
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    if (!std::isfinite(breakpoints_[i])) throw InputError("breakpoints must be finite");
    if (i > 0 && !(breakpoints_[i] > breakpoints_[i - 1])) throw InputError("breakpoints must increase");
  }
  for (double s : slopes_)
    if (!(s >= 0.0 && s <= 1.0)) throw InputError("contraction slopes must lie in [0, 1]");
}

NormalContraction NormalContraction::linear(double slope) { return NormalContraction({}, {slope}); }
NormalContraction NormalContraction::positive_part() { return NormalContraction({0.0}, {0.0, 1.0}); }

NormalContraction NormalContraction::clamp(double c) {
  if (!(c > 0.0)) throw InputError("clamp level must be positive");
  return NormalContraction({-c, c}, {0.0, 1.0, 0.0});
}

NormalContraction NormalContraction::truncation_midpoint(double alpha) {
  if (!(alpha > 0.0)) throw InputError("alpha must be positive");
  return NormalContraction({-alpha, alpha}, {0.5, 1.0, 0.5});
}

double NormalContraction::operator()(double x) const {
  const auto& bp = breakpoints_;
  double val = 0.0, cur = 0.0;
  if (x >= 0.0) {
    auto j = static_cast<std::size_t>(std::upper_bound(bp.begin(), bp.end(), 0.0) - bp.begin());
    while (j < bp.size() && bp[j] < x) {
      val += slopes_[j] * (bp[j] - cur);
      cur = bp[j];
      ++j;
    }
    return val + slopes_[j] * (x - cur);
  }
  auto j = static_cast<std::size_t>(std::lower_bound(bp.begin(), bp.end(), 0.0) - bp.begin());
  while (j > 0 && bp[j - 1] > x) {
    val -= slopes_[j] * (cur - bp[j - 1]);
    cur = bp[j - 1];
    --j;
  }
  return val - slopes_[j] * (cur - x);
}

FunctionVector NormalContraction::apply(const FunctionVector& u) const {
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = (*this)(u[i]);
  return FunctionVector(std::move(out));
}

NormalContraction sample_normal_contraction(Rng& rng, double range) {
  if (!(range > 0.0)) throw InputError("contraction range must be positive");
  const auto k = 1 + static_cast<std::size_t>(std::min(7.0, uniform(rng, 0.0, 8.0)));
  std::vector<double> bp(k);
  for (auto& b : bp) b = uniform(rng, -range, range);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  std::vector<double> slopes(bp.size() + 1);
  for (auto& s : slopes) s = uniform(rng, 0.0, 1.0);
  return NormalContraction(std::move(bp), std::move(slopes));
}

}  // namespace nldf
