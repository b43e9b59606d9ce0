#pragma once

#include <cstdint>
#include <utility>

#include "nldf/convex_solver.hpp"
#include "nldf/modular.hpp"

namespace nldf {

struct SymSettings {
  DescentSettings inner{4000, 1e-12, 10};
  std::size_t lambda_grid_size = 64;
  std::size_t refine_steps = 40;  // golden-section steps around the best grid point
};

/// sym E of a (possibly non-symmetric) functional: the largest lsc convex
/// minorant of E_1(.) and E_1(-.), evaluated as the convex-hull infimum
///   inf { lambda E_1(a) + (1 - lambda) E_1(b) : f = lambda a - (1 - lambda) b }.
class SymClosureProblem {
 public:
  explicit SymClosureProblem(ModularProblem base, SymSettings settings = {});

  const ModularProblem& base() const { return base_; }
  const Functional& functional() const { return base_.functional(); }
  const MeasuredGraph& graph() const { return base_.graph(); }
  const SymSettings& settings() const { return settings_; }

 private:
  ModularProblem base_;
  SymSettings settings_;
};

struct SymValue {
  ExtReal value = ExtReal::infinity();  // certified upper bound
  double lower = 0.0;                   // affine-minorant lower bound
  double lambda = 1.0;                  // best convex-combination weight
  FunctionVector u;                     // lambda a
  FunctionVector v;                     // (1 - lambda) b, so that f = u - v
  std::size_t inner_solves = 0;
  bool converged = true;  // every inner solve closed its gap
};

/// Feasible range of the combination weight: lambda in [lo, hi] admits some
/// decomposition with both pieces in the node box of dom E. Empty when
/// lo > hi. Slope constraints are not taken into account.
std::pair<double, double> sym_lambda_range(const SymClosureProblem& prob, const FunctionVector& f);

/// f lies in dom(sym E) (decided exactly for box-shaped domains; with slope
/// constraints only the trivial decompositions lambda in {0, 1} are used).
bool sym_domain_contains(const SymClosureProblem& prob, const FunctionVector& f);

SymValue sym_eval(const SymClosureProblem& prob, const FunctionVector& f);

struct SymDecomposition {
  FunctionVector u;
  FunctionVector v;
  double lambda = 1.0;
  double residual = 0.0;  // ||f - (u - v)||_H
  bool u_in_domain = false;
  bool v_in_domain = false;
  bool certified(double tol = 1e-8) const { return u_in_domain && v_in_domain && residual <= tol; }
};

/// f = u - v with u, v in dom E; throws InputError when f is outside dom(sym E).
SymDecomposition sym_decompose(const SymClosureProblem& prob, const FunctionVector& f);

struct SpanDomainReport {
  VerificationReport report;
  std::vector<double> scalings;  // largest t found with t (u - v) in dom(sym E)
};

/// Samples u, v in dom E and confirms that some positive multiple of u - v
/// lies in dom(sym E) and decomposes with certified pieces.
SpanDomainReport span_domain_check(const SymClosureProblem& prob, std::size_t samples, std::uint64_t seed);

/// Luxemburg gauge of sym E (threshold 1). Coincides with ||.||_D for
/// symmetric functionals.
NormValue sym_energy_norm(const SymClosureProblem& prob, const FunctionVector& f);

}  // namespace nldf
