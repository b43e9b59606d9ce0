#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "nldf/contraction.hpp"
#include "nldf/modular.hpp"

namespace nldf {

/// Pass thresholds for every check in this module.
struct DirichletThresholds {
  double inequality = 1e-9;      // normalized margin floor for (1), (2), contractions
  double counterexample = 1e-6;  // absolute slack on the exactly-valued examples
  double continuity_tail = 1e-4;
};

/// rhs - lhs of an inequality lhs <= rhs together with its scale.
/// Infinite right-hand sides make the check vacuous (+inf).
struct Margin {
  double value = 0.0;
  double scale = 1.0;
  double normalized() const { return std::isfinite(value) ? value / scale : value; }
  bool pass(double threshold) const { return normalized() >= -threshold; }
};

/// E(u) + E(v) - E(u ^ v) - E(u v v)
Margin check_lattice_inequality(const Functional& e, const FunctionVector& u, const FunctionVector& v);
/// E(u) + E(v) - E(v + q) - E(u - q) with q the alpha-midpoint of u - v
Margin check_truncation_inequality(const Functional& e, const FunctionVector& u, const FunctionVector& v,
                                   double alpha);
/// E(u) + E(v) - E(u - p(u - v)) - E(v + p(u - v))
Margin check_beurling_deny(const Functional& e, const FunctionVector& u, const FunctionVector& v,
                           const NormalContraction& p);

struct DirichletSweepReport {
  VerificationReport lattice;
  VerificationReport truncation;
  VerificationReport contraction;
  // Both properties re-derived through contractions: x_+ reproduces the
  // lattice arguments, the alpha-midpoint the truncation arguments.
  VerificationReport converse;
  bool pass() const { return lattice.pass() && truncation.pass() && contraction.pass() && converse.pass(); }
};

/// Seeded sweep: `samples` pairs for (1) and (2), `contraction_samples`
/// triples with a sampled contraction whose breakpoints span 4x the data.
DirichletSweepReport verify_dirichlet(const Functional& e, std::size_t samples, std::size_t contraction_samples,
                                      std::uint64_t seed, const DirichletThresholds& th = {});

struct RieszReport {
  bool precondition = false;
  bool min_in_space = false;
  bool max_in_space = false;
  bool pass() const { return precondition && min_in_space && max_in_space; }
};
RieszReport check_riesz_closure(const ModularProblem& prob, const FunctionVector& u, const FunctionVector& v);

/// ||u|| + ||v|| - ||u ^ v||, normalized by ||u|| + ||v||. Symmetric only.
Margin check_lattice_norm_bound(const ModularProblem& prob, const FunctionVector& u, const FunctionVector& v);

/// Pairs in the energy space; threshold 3x the norm tolerance.
VerificationReport sweep_lattice_norm_bound(const ModularProblem& prob, std::size_t samples, std::uint64_t seed);

struct LinfCounterexample {
  std::size_t n = 0;
  double norm_f = 0.0, norm_min = 0.0, norm_max = 0.0, norm_zero = 0.0;
  double l2_f = 0.0, sup_f = 0.0;
  double lhs = 0.0;  // ||f ^ 0|| + ||f v 0||
  double rhs = 0.0;  // ||f|| + ||0||
  bool pass = false;
};
/// P_n with measure 1/n, |u| <= 1 indicator, f = -1 / +1 on the two halves.
LinfCounterexample run_linf_counterexample(std::size_t n, const DirichletThresholds& th = {});

struct LipschitzRow {
  std::size_t k = 0;
  double norm_g = 0.0;       // ||g_k||, g_k = 1/k
  double norm_f_min_g = 0.0;  // ||f ^ g_k||, f(x) = x
  double kink_position = 0.0;
};
struct LipschitzCounterexample {
  std::size_t n = 0;
  bool kink_aligned = true;
  std::vector<LipschitzRow> rows;
  double worst_g_ratio = 0.0;  // max k ||g_k|| / 2, must stay <= 1
  double min_f_min_g = 0.0;
  bool pass = false;
};
/// Slope-1 indicator on a path discretization of [0, 1] with n nodes, for
/// k = 1..k_max. The kink-aligned mesh moves one node onto x = 1/k so the
/// kink is resolved for every k; otherwise the mesh is uniform.
LipschitzCounterexample run_lipschitz_counterexample(std::size_t n, std::size_t k_max, bool kink_aligned = true,
                                                     const DirichletThresholds& th = {});

struct ContinuityReport {
  std::vector<double> min_tail;  // ||u_n ^ v_n - u ^ v||, n = 1..N
  std::vector<double> max_tail;  // ||u_n v v_n - u v v||
  std::size_t monotone_violations = 0;
  double final_min = 0.0, final_max = 0.0;
  bool pass = false;
};
/// Joint sequences u_n = u + wu / n, v_n = v + wv / n, n = 1..N. Rejects
/// functionals whose domain is not a linear subspace.
ContinuityReport check_lattice_continuity(const ModularProblem& prob, const FunctionVector& u,
                                          const FunctionVector& v, const FunctionVector& wu,
                                          const FunctionVector& wv, std::size_t N,
                                          const DirichletThresholds& th = {});

struct CutoffRow {
  double c = 0.0;
  double e1_truncated = 0.0;
  double e1 = 0.0;
  double distance = 0.0;  // ||trunc(u, c) - u||
};
struct CutoffReport {
  std::vector<CutoffRow> rows;
  bool energy_pass = true;
  bool convergence_pass = true;
  bool pass() const { return energy_pass && convergence_pass; }
};
CutoffReport check_cutoff(const ModularProblem& prob, const FunctionVector& u, const std::vector<double>& cs,
                          const DirichletThresholds& th = {});

struct ShiftedMinReport {
  bool precondition = false;
  bool membership = false;
  double identity_error = 0.0;
  bool pass() const { return precondition && membership && identity_error <= 1e-12; }
};
/// u ^ (c - g) lies in the space and equals ((u + g) ^ c) - g.
ShiftedMinReport check_corollary_shifted_min(const ModularProblem& prob, const FunctionVector& u,
                                             const FunctionVector& g, double c);

}  // namespace nldf
