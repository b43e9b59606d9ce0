#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nldf/convex_solver.hpp"
#include "nldf/modular.hpp"

namespace nldf {

struct CapacitySettings {
  double outer_tol = 1e-8;  // relative width of the bisection bracket on the capacity value
  std::size_t max_bisection = 200;
  DescentSettings inner{50000, 1e-13, 10};
};

/// cap(A) = inf { ||u||_D : u >= 1 on U }, U the radius-r hull of A.
class CapacityProblem {
 public:
  CapacityProblem(ModularProblem modular, std::vector<std::size_t> target_set, std::size_t hull_radius = 0,
                  CapacitySettings settings = {});

  const ModularProblem& modular() const { return modular_; }
  const MeasuredGraph& graph() const { return modular_.graph(); }
  const std::vector<std::size_t>& target() const { return target_; }
  std::size_t hull_radius() const { return hull_radius_; }
  const CapacitySettings& settings() const { return settings_; }
  bool empty() const { return target_.empty(); }
  /// The open hull U (sorted); empty for an empty target.
  std::vector<std::size_t> hull() const;

  CapacityProblem with_target(std::vector<std::size_t> target_set) const;

 private:
  ModularProblem modular_;
  std::vector<std::size_t> target_;
  std::size_t hull_radius_;
  CapacitySettings settings_;
};

struct CapacityResult {
  ExtReal value;             // ||potential||_D
  FunctionVector potential;  // feasible: 1 on U, 0 <= u <= 1
  double feasibility_residual = 0.0;
  std::size_t iterations = 0;  // inner iterations over all bisection steps
  std::size_t bisection_steps = 0;
  double lower = 0.0;  // bisection bracket on the capacity
  double upper = 0.0;
  bool certified = true;  // every bisection decision was certified
  std::string diagnostic;
};

CapacityResult capacity(const CapacityProblem& prob);

/// rhs - lhs of a capacity inequality, normalized by the largest capacity
/// involved; passes when normalized >= -threshold.
struct CapMargin {
  double value = 0.0;
  double scale = 1.0;
  double threshold = 0.0;
  double normalized() const { return scale > 0.0 ? value / scale : value; }
  bool pass() const { return normalized() >= -threshold; }
};

/// cap(B) - cap(A) for A subset of B.
CapMargin check_cap_monotone(const CapacityProblem& a, const CapacityProblem& b);

struct SubadditivityReport {
  CapMargin margin;      // sum cap(A_i) - cap(union)
  bool join_feasible = false;  // the join of the (truncated) potentials is admissible for the union
  double join_norm = 0.0;
  double sum_of_norms = 0.0;
  bool pass() const { return margin.pass() && join_feasible; }
};
SubadditivityReport check_cap_subadditive(const CapacityProblem& a, const CapacityProblem& b);
SubadditivityReport check_cap_countably_subadditive(const std::vector<CapacityProblem>& family);

struct DecreasingSetsReport {
  std::vector<double> caps;
  double limit_cap = 0.0;  // cap of the intersection
  bool monotone = true;
  bool limit_matches = true;
  bool pass() const { return monotone && limit_matches; }
};
/// chain[0] ⊇ chain[1] ⊇ ... ; the intersection is the last element.
DecreasingSetsReport check_cap_decreasing_sets(const std::vector<CapacityProblem>& chain);

struct PolarReport {
  double cap = 0.0;
  double bound = 0.0;  // sqrt(m(hull(A)))
  bool polar = false;
  bool pass = false;
};
PolarReport check_polar_iff_empty(const CapacityProblem& prob);

struct ChebyshevReport {
  CapMargin margin;   // ||f|| / lambda - cap({|f| > lambda})
  std::vector<std::size_t> superlevel;
  double cap = 0.0;
  double rhs = 0.0;
  bool certificate_feasible = false;  // |f| / lambda >= 1 on the superlevel set
  double certificate_norm = 0.0;
  bool pass() const { return margin.pass() && certificate_feasible; }
};
ChebyshevReport check_chebyshev(const ModularProblem& modular, const FunctionVector& f, double lambda,
                                const CapacitySettings& settings = {});

struct PerturbationRow {
  std::vector<std::size_t> set;
  double cap_base = 0.0;
  double cap_perturbed = 0.0;
};
struct PerturbationReport {
  double alpha = 2.0;
  std::vector<PerturbationRow> rows;
  bool same_polar_sets = true;
  bool dominance = true;  // cap under E_alpha >= cap under E
  std::string note;
  bool pass() const { return same_polar_sets && dominance; }
};
PerturbationReport check_polar_equivalence_under_perturbation(const ModularProblem& base, double alpha,
                                                              const std::vector<std::vector<std::size_t>>& sets,
                                                              std::size_t hull_radius = 0,
                                                              const CapacitySettings& settings = {});

struct CapacityLemmaSweep {
  VerificationReport monotone;
  VerificationReport subadditive;
  VerificationReport countable;
  VerificationReport decreasing;
  VerificationReport polar;
  bool pass() const {
    return monotone.pass() && subadditive.pass() && countable.pass() && decreasing.pass() && polar.pass();
  }
};
/// `families` randomized set families on the problem's graph.
CapacityLemmaSweep sweep_capacity_lemmas(const ModularProblem& modular, std::size_t families, std::uint64_t seed,
                                         std::size_t hull_radius = 0, const CapacitySettings& settings = {});

/// Random (f, lambda) pairs, including lambda above ||f||_inf.
VerificationReport sweep_chebyshev(const ModularProblem& modular, std::size_t samples, std::uint64_t seed,
                                   const CapacitySettings& settings = {});

}  // namespace nldf
