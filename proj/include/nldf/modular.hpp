#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "nldf/functional.hpp"
#include "nldf/report.hpp"

namespace nldf {

struct NormSettings {
  double tol = 1e-10;     // relative bisection tolerance
  int bracket_cap = 128;  // max doublings / halvings of the bracket
};

enum class NormStatus {
  ok,
  not_in_space,     // no positive scaling enters the domain (decided exactly)
  exceeds_range,    // bracket exhausted although the vector lies in the space
};

/// A Luxemburg gauge value with its certified bisection bracket
/// lower < value <= upper (lower == upper when attained at a known bound).
struct NormValue {
  ExtReal value;
  double lower = 0.0;
  double upper = 0.0;
  double rel_tol = 0.0;
  NormStatus status = NormStatus::ok;
  int evaluations = 0;

  double v() const { return value.value(); }
  bool finite() const { return value.finite(); }
};

using Modular = std::function<ExtReal(std::span<const double>)>;

/// inf { lambda > 0 : rho(u / lambda) <= threshold } for a convex rho with
/// rho(0) = 0, by bracketed bisection. `lower_bound` must be a certified
/// lower bound of the gauge (0 if none is known).
NormValue luxemburg_gauge(const Modular& rho, std::span<const double> u, double threshold, double lower_bound,
                          const NormSettings& settings, bool in_space = true);

/// E, E_1 = ||.||_H^2 + E, and the norm settings on one graph.
class ModularProblem {
 public:
  explicit ModularProblem(Functional e, NormSettings settings = {});

  const Functional& functional() const { return e_; }
  const MeasuredGraph& graph() const { return e_.graph(); }
  const NormSettings& settings() const { return settings_; }

  ExtReal E(std::span<const double> u) const { return e_(u); }
  ExtReal E1(std::span<const double> u) const;
  Modular E1_modular() const;
  Modular E_modular() const;

  /// Inequality tolerance used by all checks: three norm tolerances.
  double check_tol() const { return 3.0 * settings_.tol; }

 private:
  Functional e_;
  NormSettings settings_;
};

ExtReal eval_E1(const ModularProblem& prob, const FunctionVector& u);

/// ||u||_D
NormValue energy_norm(const ModularProblem& prob, const FunctionVector& u);
/// |u|_D, gauge of E alone; vanishes on the null space of E
NormValue energy_seminorm(const ModularProblem& prob, const FunctionVector& u);
/// ||u||_{D, alpha}
NormValue energy_norm_alpha(const ModularProblem& prob, const FunctionVector& u, double alpha);
/// Some positive multiple of u has finite E_1 (decided exactly).
bool in_energy_space(const ModularProblem& prob, const FunctionVector& u);

struct UnitBallReport {
  double e1 = 0.0;
  double norm = 0.0;
  bool ball_equivalence = true;  // E_1(u) <= 1  <=>  ||u|| <= 1
  bool modular_below_norm = true;  // E_1(u) <= ||u|| whenever ||u|| <= 1
  bool pass() const { return ball_equivalence && modular_below_norm; }
};
UnitBallReport check_unit_ball_property(const ModularProblem& prob, const FunctionVector& u);

struct EquivalenceChainValues {
  double h = 0.0;         // ||x||_H
  double semi = 0.0;      // |x|_D
  double norm = 0.0;      // ||x||_D
  double norm_two = 0.0;  // ||x||_{D,2}
};
EquivalenceChainValues equivalence_chain(const ModularProblem& prob, const FunctionVector& x);

struct NormEquivalenceReport {
  VerificationReport chain;
  double worst_norm_over_sum = 0.0;  // max ||x||_D / (||x||_H + |x|_D), an estimate of 1/C
  double worst_sum_over_norm = 0.0;  // max (||x||_H + |x|_D) / ||x||_D, at most 2
};
NormEquivalenceReport check_norm_equivalence(const ModularProblem& prob, std::size_t sample_count,
                                             std::uint64_t seed);

struct ModularConvergenceReport {
  std::vector<double> lambdas;
  std::vector<std::vector<double>> modular_tails;  // [lambda][n] = E_1(lambda u_n)
  std::vector<double> norms;                       // ||u_n||_D
  bool modular_to_zero = false;  // every lambda's tail ends below the cutoff
  bool norm_to_zero = false;
  bool consistent() const { return modular_to_zero == norm_to_zero; }
};
ModularConvergenceReport check_modular_convergence(const ModularProblem& prob,
                                                   const std::vector<FunctionVector>& sequence,
                                                   const std::vector<double>& lambdas, double cutoff = 1e-6);

struct NormAxiomReport {
  VerificationReport homogeneity;
  VerificationReport triangle;
  VerificationReport definiteness;
  VerificationReport dominance;  // ||u||_H <= ||u||_D
  bool pass() const { return homogeneity.pass() && triangle.pass() && definiteness.pass() && dominance.pass(); }
};
/// Norm axioms on seeded samples, relative tolerance `rel_tol`. Negative
/// multipliers are only sampled for symmetric functionals.
NormAxiomReport check_norm_axioms(const ModularProblem& prob, std::size_t samples, std::uint64_t seed,
                                  double rel_tol = 1e-8);

/// Same axioms for an arbitrary norm routine (used for the symmetric-closure
/// norm of non-symmetric functionals).
NormAxiomReport check_norm_axioms(const MeasuredGraph& g,
                                  const std::function<NormValue(const FunctionVector&)>& norm,
                                  bool symmetric, std::size_t samples, std::uint64_t seed, double rel_tol);

}  // namespace nldf
