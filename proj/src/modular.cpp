#include "nldf/modular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nldf/sampling.hpp"

namespace nldf {

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();

Json vec_json(const FunctionVector& u) { return Json(u.vec()); }

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}
}  // namespace

NormValue luxemburg_gauge(const Modular& rho, std::span<const double> u, double threshold, double lower_bound,
                          const NormSettings& settings, bool in_space) {
  NormValue r;
  r.rel_tol = settings.tol;
  if (std::all_of(u.begin(), u.end(), [](double x) { return x == 0.0; })) {
    r.value = 0.0;
    return r;
  }
  if (!in_space) {
    r.value = ExtReal::infinity();
    r.upper = inf;
    r.status = NormStatus::not_in_space;
    return r;
  }
  std::vector<double> scratch(u.size());
  auto feasible = [&](double lam) {
    for (std::size_t i = 0; i < u.size(); ++i) scratch[i] = u[i] / lam;
    ++r.evaluations;
    return rho(scratch) <= ExtReal(threshold);
  };

  double lo = std::max(0.0, lower_bound);
  double hi = std::max(1.0, 2.0 * lo);
  if (lo > 0.0 && feasible(lo)) {
    r.value = lo;
    r.lower = r.upper = lo;
    return r;
  }
  for (int k = 0; !feasible(hi); ++k) {
    if (k >= settings.bracket_cap) {
      r.value = ExtReal::infinity();
      r.lower = hi;
      r.upper = inf;
      r.status = NormStatus::exceeds_range;
      return r;
    }
    lo = hi;
    hi *= 2.0;
  }
  if (lo == 0.0) {
    double cand = 0.5 * hi;
    for (int k = 0;; ++k) {
      if (!feasible(cand)) {
        lo = cand;
        break;
      }
      hi = cand;
      cand *= 0.5;
      if (k >= settings.bracket_cap) {
        r.value = 0.0;
        r.upper = hi;
        return r;
      }
    }
  }
  while (hi - lo > settings.tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (feasible(mid)) hi = mid;
    else lo = mid;
  }
  r.value = hi;
  r.lower = lo;
  r.upper = hi;
  return r;
}

ModularProblem::ModularProblem(Functional e, NormSettings settings) : e_(std::move(e)), settings_(settings) {
  if (!(settings_.tol > 0.0)) throw InputError("norm tolerance must be positive");
  if (settings_.bracket_cap < 1) throw InputError("bracket cap must be at least 1");
}

ExtReal ModularProblem::E1(std::span<const double> u) const { return ExtReal(l2_norm_squared(graph(), u)) + e_(u); }

Modular ModularProblem::E1_modular() const {
  return [this](std::span<const double> u) { return E1(u); };
}

Modular ModularProblem::E_modular() const {
  return [this](std::span<const double> u) { return e_(u); };
}

ExtReal eval_E1(const ModularProblem& prob, const FunctionVector& u) { return prob.E1(u.values()); }

bool in_energy_space(const ModularProblem& prob, const FunctionVector& u) {
  require_same_size(prob.graph(), u.values());
  return prob.functional().domain().ray_limit(prob.graph(), u.values()) > 0.0 || u.is_zero();
}

NormValue energy_norm(const ModularProblem& prob, const FunctionVector& u) {
  require_same_size(prob.graph(), u.values());
  return luxemburg_gauge(prob.E1_modular(), u.values(), 1.0, l2_norm(prob.graph(), u), prob.settings(),
                         in_energy_space(prob, u));
}

NormValue energy_seminorm(const ModularProblem& prob, const FunctionVector& u) {
  require_same_size(prob.graph(), u.values());
  return luxemburg_gauge(prob.E_modular(), u.values(), 1.0, 0.0, prob.settings(), in_energy_space(prob, u));
}

NormValue energy_norm_alpha(const ModularProblem& prob, const FunctionVector& u, double alpha) {
  if (!(alpha > 0.0)) throw InputError("alpha must be positive");
  require_same_size(prob.graph(), u.values());
  return luxemburg_gauge(prob.E1_modular(), u.values(), alpha, l2_norm(prob.graph(), u) / std::sqrt(alpha),
                         prob.settings(), in_energy_space(prob, u));
}

UnitBallReport check_unit_ball_property(const ModularProblem& prob, const FunctionVector& u) {
  UnitBallReport r;
  const ExtReal e1 = eval_E1(prob, u);
  const NormValue n = energy_norm(prob, u);
  r.e1 = e1.value();
  r.norm = n.v();
  const double tol = prob.check_tol();
  if (e1 <= 1.0) r.ball_equivalence = r.norm <= 1.0 + tol;
  else r.ball_equivalence = r.norm >= 1.0 - tol;
  if (r.norm <= 1.0 && e1.finite()) r.modular_below_norm = r.e1 <= r.norm + tol;
  return r;
}

EquivalenceChainValues equivalence_chain(const ModularProblem& prob, const FunctionVector& x) {
  EquivalenceChainValues c;
  c.h = l2_norm(prob.graph(), x);
  c.semi = energy_seminorm(prob, x).v();
  c.norm = energy_norm(prob, x).v();
  c.norm_two = energy_norm_alpha(prob, x, 2.0).v();
  return c;
}

NormEquivalenceReport check_norm_equivalence(const ModularProblem& prob, std::size_t sample_count,
                                             std::uint64_t seed) {
  if (sample_count < 1) throw InputError("sample_count must be at least 1");
  NormEquivalenceReport rep;
  rep.chain.check = "norm_equivalence_chain";
  rep.chain.threshold = prob.check_tol();
  rep.chain.seed = seed;
  const std::size_t n = prob.graph().node_count();
  auto rel = [](double rhs, double lhs) { return rhs == lhs ? 0.0 : (rhs - lhs) / std::max(std::abs(rhs), 1e-300); };
  for (std::size_t s = 0; s < sample_count; ++s) {
    auto rng = make_stream(seed, s);
    FunctionVector x = s == 0 ? FunctionVector::zeros(n) : random_vector(n, rng, log_uniform(rng, 1e-2, 1e2));
    const auto c = equivalence_chain(prob, x);
    if (!std::isfinite(c.norm)) continue;
    double m = inf;
    m = std::min(m, rel(c.norm, c.h));
    m = std::min(m, rel(c.norm, c.semi));
    m = std::min(m, rel(2.0 * c.norm, c.h + c.semi));
    m = std::min(m, rel(c.h + c.semi, c.norm_two));
    rep.chain.record(m, [&] {
      return Json{{"x", vec_json(x)}, {"h", c.h}, {"semi", c.semi}, {"norm", c.norm}, {"norm_two", c.norm_two}};
    });
    if (c.norm > 0.0) {
      rep.worst_norm_over_sum = std::max(rep.worst_norm_over_sum, c.norm / (c.h + c.semi));
      rep.worst_sum_over_norm = std::max(rep.worst_sum_over_norm, (c.h + c.semi) / c.norm);
    }
  }
  return rep;
}

ModularConvergenceReport check_modular_convergence(const ModularProblem& prob,
                                                   const std::vector<FunctionVector>& sequence,
                                                   const std::vector<double>& lambdas, double cutoff) {
  ModularConvergenceReport r;
  r.lambdas = lambdas;
  if (sequence.empty() || lambdas.empty()) throw InputError("modular convergence needs a sequence and lambdas");
  r.modular_to_zero = true;
  for (double lam : lambdas) {
    std::vector<double> tail;
    for (const auto& u : sequence) tail.push_back(eval_E1(prob, lam * u).value());
    if (!(tail.back() <= cutoff)) r.modular_to_zero = false;
    r.modular_tails.push_back(std::move(tail));
  }
  for (const auto& u : sequence) r.norms.push_back(energy_norm(prob, u).v());
  r.norm_to_zero = r.norms.back() <= cutoff;
  return r;
}

NormAxiomReport check_norm_axioms(const MeasuredGraph& g,
                                  const std::function<NormValue(const FunctionVector&)>& norm, bool symmetric,
                                  std::size_t samples, std::uint64_t seed, double rel_tol) {
  NormAxiomReport rep;
  for (auto* r : {&rep.homogeneity, &rep.triangle, &rep.definiteness, &rep.dominance}) {
    r->threshold = rel_tol;
    r->seed = seed;
  }
  rep.homogeneity.check = "homogeneity";
  rep.triangle.check = "triangle";
  rep.definiteness.check = "definiteness";
  rep.dominance.check = "dominance";
  const std::size_t n = g.node_count();

  const double zero_norm = norm(FunctionVector::zeros(n)).v();
  rep.definiteness.record(zero_norm == 0.0 ? 0.0 : -1.0, [] { return Json{{"u", "zero"}}; });

  for (std::size_t s = 0; s < samples; ++s) {
    auto rng = make_stream(seed, s);
    const auto u = random_vector(n, rng, log_uniform(rng, 1e-2, 1e2));
    const auto v = random_vector(n, rng, log_uniform(rng, 1e-2, 1e2));
    double mu = symmetric ? uniform(rng, -3.0, 3.0) : uniform(rng, 0.05, 3.0);
    if (mu == 0.0) mu = 1.0;
    const double nu = norm(u).v(), nv = norm(v).v();
    const double nmu = norm(mu * u).v(), nsum = norm(u + v).v();
    const double target = std::abs(mu) * nu;
    rep.homogeneity.record(-std::abs(nmu - target) / std::max(target, 1e-300), [&] {
      return Json{{"u", vec_json(u)}, {"mu", mu}, {"norm_mu_u", nmu}, {"norm_u", nu}};
    });
    rep.triangle.record((nu + nv - nsum) / std::max(nu + nv, 1e-300), [&] {
      return Json{{"u", vec_json(u)}, {"v", vec_json(v)}, {"norm_sum", nsum}, {"norm_u", nu}, {"norm_v", nv}};
    });
    rep.definiteness.record(u.is_zero() || nu > 0.0 ? 0.0 : -1.0, [&] { return Json{{"u", vec_json(u)}}; });
    const double h = l2_norm(g, u);
    rep.dominance.record((nu - h) / std::max(nu, 1e-300), [&] {
      return Json{{"u", vec_json(u)}, {"norm", nu}, {"l2", h}};
    });
  }
  return rep;
}

NormAxiomReport check_norm_axioms(const ModularProblem& prob, std::size_t samples, std::uint64_t seed,
                                  double rel_tol) {
  return check_norm_axioms(
      prob.graph(), [&prob](const FunctionVector& u) { return energy_norm(prob, u); },
      prob.functional().is_symmetric(), samples, seed, rel_tol);
}

}  // namespace nldf
