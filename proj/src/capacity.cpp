#include "nldf/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "nldf/sampling.hpp"

namespace nldf {

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();

enum class Decision { feasible, infeasible, undecided };

std::vector<std::size_t> sorted_unique(std::vector<std::size_t> s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

std::vector<std::size_t> set_union(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

double residual(const FunctionVector& u, const std::vector<std::size_t>& hull) {
  double r = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) r = std::max({r, -u[i], u[i] - 1.0});
  for (auto i : hull) r = std::max(r, 1.0 - u[i]);
  return r;
}

bool admissible(const FunctionVector& u, const std::vector<std::size_t>& hull, double tol = 1e-12) {
  for (auto i : hull)
    if (u[i] < 1.0 - tol) return false;
  return true;
}

// Certified lower bound on min over the box of E_1(u / t) through
// multipliers y_k for the exponent-1 edge terms, |y_k| <= w_k (or
// 0 <= y_k <= w_k one-sided), with the rest of E linearized at x:
//   E(z / t) >= E_r(x / t) + <grad E_r, (z - x) / t> + sum_k y_k (z_a - z_b) / t.
// The inner minimum over the box is separable; y is improved by accelerated
// projected ascent with Gershgorin diagonal steps. Stops once above target.
double dual_bound(const Functional& e, const DomainConstraints& box, std::span<const double> x, double t,
                  double target, std::size_t max_it, std::vector<double>* primal = nullptr) {
  const auto& g = e.graph();
  const auto terms = e.l1_terms();
  const std::size_t n = x.size(), k = terms.size();
  std::vector<double> a(n), gr(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) a[i] = x[i] / t;
  const ExtReal rest = e.smooth_part(a, gr);
  if (rest.infinite()) return -inf;
  double c0 = rest.value();
  std::vector<double> base(n), q(n), deg(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    base[i] = gr[i] / t;
    c0 -= gr[i] * a[i];
    q[i] = g.measure(i) / (t * t);
  }
  for (const auto& term : terms) {
    deg[term.a] += 1.0;
    deg[term.b] += 1.0;
  }
  std::vector<double> step(k), lo(k), hi(k), y(k), v(k), yn(k), grad(k), c(n), z(n);
  for (std::size_t j = 0; j < k; ++j) {
    const auto& term = terms[j];
    step[j] = 1.0 / (deg[term.a] / (2.0 * g.measure(term.a)) + deg[term.b] / (2.0 * g.measure(term.b)));
    lo[j] = term.one_sided ? 0.0 : -term.weight;
    hi[j] = term.weight;
    y[j] = std::clamp(term.weight * (x[term.a] - x[term.b]) / 1e-8, lo[j], hi[j]);
  }
  auto eval = [&](const std::vector<double>& yy, bool with_grad) {
    c = base;
    for (std::size_t j = 0; j < k; ++j) {
      c[terms[j].a] += yy[j] / t;
      c[terms[j].b] -= yy[j] / t;
    }
    double val = c0;
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = std::clamp(-c[i] / (2.0 * q[i]), box.lower[i], box.upper[i]);
      val += q[i] * z[i] * z[i] + c[i] * z[i];
    }
    if (with_grad)
      for (std::size_t j = 0; j < k; ++j) grad[j] = (z[terms[j].a] - z[terms[j].b]) / t;
    return val;
  };
  double fy = eval(y, false), best = fy, mom = 1.0;
  if (primal) *primal = z;
  v = y;
  std::size_t since_best = 0;
  for (std::size_t it = 0; it < max_it && best <= target; ++it) {
    eval(v, true);
    for (std::size_t j = 0; j < k; ++j) yn[j] = std::clamp(v[j] + step[j] * grad[j], lo[j], hi[j]);
    const double fn = eval(yn, false);
    if (fn < fy) {  // restart momentum
      mom = 1.0;
      v = y;
      continue;
    }
    const double mom_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * mom * mom));
    for (std::size_t j = 0; j < k; ++j) v[j] = std::clamp(yn[j] + (mom - 1.0) / mom_next * (yn[j] - y[j]), lo[j], hi[j]);
    mom = mom_next;
    y.swap(yn);
    fy = fn;
    if (fy > best + 1e-15 * std::abs(best)) {
      best = fy;
      since_best = 0;
      if (primal) *primal = z;
    } else if (++since_best > 500) {
      break;
    }
  }
  return best;
}

class Feasibility {
 public:
  Feasibility(const CapacityProblem& prob, std::vector<std::size_t> hull)
      : prob_(prob), mp_(prob.modular()), hull_(std::move(hull)), dom_(mp_.functional().domain()) {
    floor_ = DomainConstraints(mp_.graph().node_count());
    for (std::size_t i = 0; i < floor_.size(); ++i) {
      floor_.lower[i] = 0.0;
      floor_.upper[i] = 1.0;
    }
    for (auto i : hull_) floor_.lower[i] = 1.0;
  }

  // min over admissible u in t dom(E) of E_1(u / t), decided against 1.
  Decision decide(double t, std::vector<double>& warm, std::size_t& iterations) const {
    auto c = dom_.preimage(mp_.graph(), t);
    c.intersect(floor_);
    if (c.box_empty()) return Decision::infeasible;
    const std::size_t n = c.size();
    auto scaled = [t](std::span<const double> u) {
      std::vector<double> a(u.begin(), u.end());
      for (auto& x : a) x /= t;
      return a;
    };

    if (c.has_slopes()) {
      // Pure indicator: the pointwise least admissible element minimizes ||u||.
      auto x = c.least_element(mp_.graph());
      if (!x) return Decision::infeasible;
      const ExtReal val = mp_.E1(scaled(*x));
      if (val.infinite() || val.value() > 1.0) return Decision::infeasible;
      warm = std::move(*x);
      return Decision::feasible;
    }

    auto m = mp_.graph().measure();
    BoxObjective phi;
    phi.smooth = mp_.functional().is_smooth();
    phi.kappa.resize(n);
    for (std::size_t i = 0; i < n; ++i) phi.kappa[i] = m[i] / (t * t);
    phi.value = [this, scaled](std::span<const double> u) { return mp_.E1(scaled(u)); };
    phi.subgradient = [this, t, scaled, m](std::span<const double> u, std::span<double> out) {
      const auto a = scaled(u);
      for (std::size_t i = 0; i < a.size(); ++i) out[i] += 2.0 * m[i] * a[i] / t;
      mp_.functional().add_subgradient(a, out, 1.0 / t);
    };
    if (!phi.smooth) {
      phi.smoothed = [this, t, scaled, m](std::span<const double> u, double mu, std::span<double> out) {
        const auto a = scaled(u);
        for (std::size_t i = 0; i < a.size(); ++i) out[i] += 2.0 * m[i] * a[i] / t;
        const auto s = mp_.functional().smoothed(a, mu, out, 1.0 / t);
        const double q = l2_norm_squared(mp_.graph(), a);
        if (s.smoothed.infinite()) return std::make_pair(inf, inf);
        return std::make_pair(q + s.smoothed.value(), q + s.model.value());
      };
    }
    std::vector<double> x0 = warm;
    c.project_box(x0);
    const std::size_t dual_it = 2 * prob_.settings().inner.max_iterations;
    if (!phi.smooth) {
      // Ascent on the edge multipliers: a lower bound, and its Lagrangian
      // minimizer is a primal candidate (plain smoothing stalls at 1_U).
      std::vector<double> z;
      const double db = dual_bound(mp_.functional(), c, x0, t, 1.0, dual_it, &z);
      if (db > 1.0) return Decision::infeasible;
      const ExtReal vz = phi.value(z);
      if (vz.finite() && vz.value() <= 1.0) {
        warm = std::move(z);
        return Decision::feasible;
      }
      if (vz < phi.value(x0)) x0 = std::move(z);
    }
    const auto res = minimize_on_box(phi, c, x0, prob_.settings().inner,
                                     [](double v, double lb) { return v <= 1.0 || lb > 1.0; });
    iterations += res.iterations;
    if (res.value <= 1.0) {
      warm = res.x;
      return Decision::feasible;
    }
    if (res.lower_bound > 1.0) return Decision::infeasible;
    if (!phi.smooth && dual_bound(mp_.functional(), c, res.x, t, 1.0, dual_it) > 1.0) return Decision::infeasible;
    return Decision::undecided;
  }

 private:
  const CapacityProblem& prob_;
  const ModularProblem& mp_;
  std::vector<std::size_t> hull_;
  DomainConstraints dom_;
  DomainConstraints floor_{0};
};

struct Scale {
  double operator()(std::initializer_list<double> xs) const {
    double s = 0.0;
    for (double x : xs) s = std::max(s, std::abs(x));
    return s > 0.0 ? s : 1.0;
  }
};

double log_uniform(Rng& rng, double lo, double hi) { return std::exp(uniform(rng, std::log(lo), std::log(hi))); }

}  // namespace

CapacityProblem::CapacityProblem(ModularProblem modular, std::vector<std::size_t> target_set,
                                 std::size_t hull_radius, CapacitySettings settings)
    : modular_(std::move(modular)),
      target_(sorted_unique(std::move(target_set))),
      hull_radius_(hull_radius),
      settings_(settings) {
  const auto& e = modular_.functional();
  if (!e.is_symmetric()) throw InputError("capacity needs a symmetric functional");
  if (e.domain().has_slopes() && e.has_energy_part())
    throw InputError("capacity supports slope constraints only for pure indicator functionals");
  for (auto i : target_)
    if (i >= graph().node_count()) throw InputError("target node " + std::to_string(i) + " out of range");
  if (!(settings_.outer_tol > 0.0)) throw InputError("outer_tol must be positive");
}

std::vector<std::size_t> CapacityProblem::hull() const {
  if (target_.empty()) return {};
  return graph().hull(target_, hull_radius_);
}

CapacityProblem CapacityProblem::with_target(std::vector<std::size_t> target_set) const {
  return CapacityProblem(modular_, std::move(target_set), hull_radius_, settings_);
}

CapacityResult capacity(const CapacityProblem& prob) {
  const std::size_t n = prob.graph().node_count();
  CapacityResult r;
  if (prob.empty()) {
    r.value = 0.0;
    r.potential = FunctionVector::zeros(n);
    return r;
  }
  const auto& mp = prob.modular();
  const auto hull = prob.hull();
  const auto one_u = indicator(n, hull);
  const Feasibility feas(prob, hull);

  double lo = std::sqrt(prob.graph().mass_of(hull));
  const NormValue top = energy_norm(mp, one_u);
  if (!top.finite()) {
    r.value = ExtReal::infinity();
    r.potential = one_u;
    r.lower = lo;
    r.upper = inf;
    r.certified = false;
    r.diagnostic = "indicator of the hull is outside the energy space";
    return r;
  }
  double hi = top.v();
  std::vector<double> best = one_u.vec();
  std::vector<double> warm = best;

  if (lo < hi) {
    auto d = feas.decide(lo, warm, r.iterations);
    ++r.bisection_steps;
    if (d == Decision::feasible) {
      hi = lo;
      best = warm;
    } else if (d == Decision::undecided) {
      r.certified = false;
    }
  } else {
    lo = hi;
  }
  while (hi - lo > prob.settings().outer_tol * hi && r.bisection_steps < prob.settings().max_bisection) {
    const double mid = 0.5 * (lo + hi);
    const auto d = feas.decide(mid, warm, r.iterations);
    ++r.bisection_steps;
    if (d == Decision::feasible) {
      hi = mid;
      best = warm;
    } else {
      lo = mid;
      if (d == Decision::undecided) {
        r.certified = false;
        warm = best;
      }
    }
  }
  if (hi - lo > prob.settings().outer_tol * hi) {
    r.certified = false;
    r.diagnostic = "bisection step limit reached";
  }
  if (!r.certified && r.diagnostic.empty()) r.diagnostic = "inner solver stagnated; lower bracket not certified";
  r.potential = FunctionVector(best);
  r.feasibility_residual = residual(r.potential, hull);
  r.value = std::min(hi, energy_norm(mp, r.potential).v());
  r.lower = lo;
  r.upper = hi;
  return r;
}

namespace {

void require_compatible(const CapacityProblem& a, const CapacityProblem& b) {
  if (&a.graph() != &b.graph() || a.hull_radius() != b.hull_radius() ||
      a.modular().functional().describe() != b.modular().functional().describe())
    throw InputError("capacity problems must share graph, functional, and hull radius");
}

SubadditivityReport subadditivity(const std::vector<CapacityProblem>& family, const std::vector<CapacityResult>& rs,
                                  const CapacityProblem& uni, const CapacityResult& ru) {
  SubadditivityReport rep;
  const std::size_t n = uni.graph().node_count();
  double sum = 0.0, biggest = ru.value.value();
  std::vector<double> join(n, 0.0);
  for (std::size_t k = 0; k < family.size(); ++k) {
    sum += rs[k].value.value();
    biggest = std::max(biggest, rs[k].value.value());
    for (std::size_t i = 0; i < n; ++i) join[i] = std::max(join[i], std::min(rs[k].potential[i], 1.0));
    rep.sum_of_norms += energy_norm(family[k].modular(), rs[k].potential).v();
  }
  rep.margin.value = sum - ru.value.value();
  rep.margin.scale = biggest > 0.0 ? biggest : 1.0;
  rep.margin.threshold = static_cast<double>(family.size() + 1) * uni.settings().outer_tol;
  const FunctionVector j(join);
  rep.join_norm = energy_norm(uni.modular(), j).v();
  const bool bounded = rep.join_norm <= rep.sum_of_norms * (1.0 + uni.modular().check_tol()) + 1e-15;
  rep.join_feasible = admissible(j, uni.hull()) && residual(j, uni.hull()) <= 1e-12 && bounded;
  return rep;
}

}  // namespace

CapMargin check_cap_monotone(const CapacityProblem& a, const CapacityProblem& b) {
  require_compatible(a, b);
  if (!std::includes(b.target().begin(), b.target().end(), a.target().begin(), a.target().end()))
    throw InputError("monotonicity check needs A to be a subset of B");
  const double ca = capacity(a).value.value(), cb = capacity(b).value.value();
  return {cb - ca, Scale{}({ca, cb}), 2.0 * a.settings().outer_tol};
}

SubadditivityReport check_cap_subadditive(const CapacityProblem& a, const CapacityProblem& b) {
  return check_cap_countably_subadditive({a, b});
}

SubadditivityReport check_cap_countably_subadditive(const std::vector<CapacityProblem>& family) {
  if (family.empty()) throw InputError("subadditivity needs a nonempty family");
  std::vector<std::size_t> uni;
  std::vector<CapacityResult> rs;
  for (const auto& p : family) {
    require_compatible(family.front(), p);
    uni = set_union(uni, p.target());
    rs.push_back(capacity(p));
  }
  const auto pu = family.front().with_target(uni);
  auto rep = subadditivity(family, rs, pu, capacity(pu));
  if (family.size() == 2) rep.margin.threshold = 3.0 * family.front().settings().outer_tol;
  return rep;
}

DecreasingSetsReport check_cap_decreasing_sets(const std::vector<CapacityProblem>& chain) {
  if (chain.empty()) throw InputError("decreasing-sets check needs a nonempty chain");
  DecreasingSetsReport rep;
  const double tol = chain.front().settings().outer_tol;
  for (std::size_t k = 0; k < chain.size(); ++k) {
    require_compatible(chain.front(), chain[k]);
    if (k > 0 && !std::includes(chain[k - 1].target().begin(), chain[k - 1].target().end(),
                                chain[k].target().begin(), chain[k].target().end()))
      throw InputError("chain must be decreasing");
    rep.caps.push_back(capacity(chain[k]).value.value());
  }
  const double scale = std::max(1.0 * (rep.caps.front() > 0.0 ? rep.caps.front() : 1.0), 1e-300);
  for (std::size_t k = 1; k < rep.caps.size(); ++k)
    if (rep.caps[k] > rep.caps[k - 1] + 2.0 * tol * scale) rep.monotone = false;
  rep.limit_cap = rep.caps.back();
  const double inf_cap = *std::min_element(rep.caps.begin(), rep.caps.end());
  rep.limit_matches = std::abs(rep.limit_cap - inf_cap) <= 2.0 * tol * scale;
  return rep;
}

PolarReport check_polar_iff_empty(const CapacityProblem& prob) {
  PolarReport rep;
  const auto r = capacity(prob);
  rep.cap = r.value.value();
  rep.bound = std::sqrt(prob.graph().mass_of(prob.hull()));
  rep.polar = rep.cap == 0.0;
  if (prob.empty()) rep.pass = rep.polar;
  else rep.pass = rep.bound > 0.0 && rep.cap >= rep.bound * (1.0 - prob.settings().outer_tol);
  return rep;
}

ChebyshevReport check_chebyshev(const ModularProblem& modular, const FunctionVector& f, double lambda,
                                const CapacitySettings& settings) {
  if (!(lambda > 0.0)) throw InputError("lambda must be positive");
  require_same_size(modular.graph(), f.values());
  ChebyshevReport rep;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (std::abs(f[i]) > lambda) rep.superlevel.push_back(i);
  const CapacityProblem prob(modular, rep.superlevel, 0, settings);
  rep.cap = capacity(prob).value.value();
  rep.rhs = energy_norm(modular, f).v() / lambda;
  rep.margin = {rep.rhs - rep.cap, Scale{}({rep.rhs, rep.cap}), 2.0 * settings.outer_tol};
  std::vector<double> cert(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) cert[i] = std::abs(f[i]) / lambda;
  const FunctionVector c(cert);
  rep.certificate_feasible = admissible(c, rep.superlevel, 0.0);
  rep.certificate_norm = energy_norm(modular, c).v();
  return rep;
}

PerturbationReport check_polar_equivalence_under_perturbation(const ModularProblem& base, double alpha,
                                                              const std::vector<std::vector<std::size_t>>& sets,
                                                              std::size_t hull_radius,
                                                              const CapacitySettings& settings) {
  if (base.functional().kind() != FunctionalKind::p_energy)
    throw InputError("the perturbation example starts from a p_energy functional");
  const ModularProblem pert(Functional::lalpha_perturbation(base.functional(), alpha), base.settings());
  PerturbationReport rep;
  rep.alpha = alpha;
  rep.note =
      "on a finite graph with full-support measure only the empty set is polar for either functional; "
      "the L^alpha mechanism of the continuum example has no further content here";
  for (const auto& s : sets) {
    PerturbationRow row;
    row.set = sorted_unique(s);
    row.cap_base = capacity(CapacityProblem(base, row.set, hull_radius, settings)).value.value();
    row.cap_perturbed = capacity(CapacityProblem(pert, row.set, hull_radius, settings)).value.value();
    if ((row.cap_base == 0.0) != (row.cap_perturbed == 0.0)) rep.same_polar_sets = false;
    if ((row.cap_base == 0.0) != row.set.empty()) rep.same_polar_sets = false;
    if (row.cap_perturbed < row.cap_base * (1.0 - 2.0 * settings.outer_tol)) rep.dominance = false;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

CapacityLemmaSweep sweep_capacity_lemmas(const ModularProblem& modular, std::size_t families, std::uint64_t seed,
                                         std::size_t hull_radius, const CapacitySettings& settings) {
  CapacityLemmaSweep sw;
  for (auto* r : {&sw.monotone, &sw.subadditive, &sw.countable, &sw.decreasing, &sw.polar}) {
    r->seed = seed;
    r->threshold = 0.0;  // each margin below is already normalized by its own threshold
  }
  sw.monotone.check = "cap_monotone";
  sw.subadditive.check = "cap_subadditive";
  sw.countable.check = "cap_countably_subadditive";
  sw.decreasing.check = "cap_decreasing_sets";
  sw.polar.check = "polar_iff_empty";

  const std::size_t n = modular.graph().node_count();
  const CapacityProblem root(modular, {}, hull_radius, settings);
  std::map<std::vector<std::size_t>, CapacityResult> cache;
  auto cap_of = [&](const std::vector<std::size_t>& s) -> const CapacityResult& {
    auto it = cache.find(s);
    if (it == cache.end()) it = cache.emplace(s, capacity(root.with_target(s))).first;
    return it->second;
  };
  // Margin in units of the lemma's tolerance: >= -1 passes.
  auto units = [](const CapMargin& m) { return m.threshold > 0.0 ? m.normalized() / m.threshold : m.normalized(); };
  const double tol = settings.outer_tol;

  for (std::size_t f = 0; f < families; ++f) {
    auto rng = make_stream(seed, f);
    cache.clear();
    const std::size_t max_size = std::max<std::size_t>(1, n / 4);
    const auto a = random_subset(n, max_size, rng);
    const auto b = set_union(a, random_subset(n, max_size, rng));
    const std::size_t k = 2 + static_cast<std::size_t>(std::min(2.0, uniform(rng, 0.0, 3.0)));
    std::vector<std::vector<std::size_t>> fam;
    for (std::size_t i = 0; i < k; ++i) fam.push_back(random_subset(n, max_size, rng));
    const bool with_empty = uniform(rng, 0.0, 1.0) < 0.2;
    if (with_empty) fam[0].clear();
    auto witness = [&] { return Json{{"family", f}, {"a", a}, {"b", b}, {"sets", fam}}; };

    // Monotonicity, A ⊂ B (and ∅ ⊂ A).
    const double ca = cap_of(a).value.value(), cb = cap_of(b).value.value();
    const CapMargin mono{cb - ca, Scale{}({ca, cb}), 2.0 * tol};
    const CapMargin mono0{ca - 0.0, Scale{}({ca}), 2.0 * tol};
    sw.monotone.record(std::min(units(mono), units(mono0)) + 1.0, witness);

    // Subadditivity for the first pair and the whole family.
    std::vector<std::size_t> uni;
    std::vector<CapacityProblem> probs;
    std::vector<CapacityResult> rs;
    for (const auto& s : fam) {
      uni = set_union(uni, s);
      probs.push_back(root.with_target(s));
      rs.push_back(cap_of(s));
    }
    {
      const std::vector<CapacityProblem> pair{probs[0], probs[1]};
      const std::vector<CapacityResult> pair_rs{rs[0], rs[1]};
      const auto u01 = set_union(fam[0], fam[1]);
      auto rep = subadditivity(pair, pair_rs, root.with_target(u01), cap_of(u01));
      rep.margin.threshold = 3.0 * tol;
      sw.subadditive.record(rep.join_feasible ? units(rep.margin) + 1.0 : -inf, witness);
    }
    {
      auto rep = subadditivity(probs, rs, root.with_target(uni), cap_of(uni));
      sw.countable.record(rep.join_feasible ? units(rep.margin) + 1.0 : -inf, witness);
    }

    // Decreasing chain B ⊇ ... ⊇ A, dropping nodes of B \ A, then A ⊇ ∅ when drawn.
    std::vector<std::vector<std::size_t>> chain{b};
    std::vector<std::size_t> cur = b;
    std::vector<std::size_t> extra;
    std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(extra));
    while (!extra.empty() && chain.size() < 4) {
      const auto j = static_cast<std::size_t>(uniform(rng, 0.0, static_cast<double>(extra.size())));
      const auto node = extra[std::min(j, extra.size() - 1)];
      extra.erase(std::find(extra.begin(), extra.end(), node));
      cur.erase(std::find(cur.begin(), cur.end(), node));
      chain.push_back(cur);
    }
    if (cur != a) chain.push_back(a);
    if (with_empty) chain.emplace_back();
    std::vector<double> caps;
    for (const auto& s : chain) caps.push_back(cap_of(s).value.value());
    const double scale = caps.front() > 0.0 ? caps.front() : 1.0;
    double worst = inf;
    for (std::size_t i = 1; i < caps.size(); ++i)
      worst = std::min(worst, (caps[i - 1] - caps[i]) / scale / (2.0 * tol));
    const double limit = caps.back(), inf_cap = *std::min_element(caps.begin(), caps.end());
    worst = std::min(worst, -std::abs(limit - inf_cap) / scale / (2.0 * tol));
    sw.decreasing.record(worst + 1.0, [&] { return Json{{"family", f}, {"chain", chain}, {"caps", caps}}; });

    // Polar iff empty, on every set of the family.
    for (const auto& kv : cache) {
      const double bound = std::sqrt(modular.graph().mass_of(root.with_target(kv.first).hull()));
      const double c = kv.second.value.value();
      double m;
      if (kv.first.empty()) m = c == 0.0 ? 0.0 : -inf;
      else m = bound > 0.0 ? (c - bound * (1.0 - tol)) / bound : -inf;
      sw.polar.record(m, [&] { return Json{{"family", f}, {"set", kv.first}, {"cap", c}, {"bound", bound}}; });
    }
  }
  return sw;
}

VerificationReport sweep_chebyshev(const ModularProblem& modular, std::size_t samples, std::uint64_t seed,
                                   const CapacitySettings& settings) {
  VerificationReport r;
  r.check = "chebyshev";
  r.seed = seed;
  r.threshold = 0.0;
  const std::size_t n = modular.graph().node_count();
  for (std::size_t s = 0; s < samples; ++s) {
    auto rng = make_stream(seed, s);
    const auto f = random_vector(n, rng, log_uniform(rng, 0.1, 10.0));
    const double sup = f.sup_norm();
    // Every tenth sample sits above ||f||_inf: empty superlevel set.
    const double lambda = s % 10 == 0 ? sup * uniform(rng, 1.01, 2.0) : sup * uniform(rng, 0.05, 0.99);
    const auto rep = check_chebyshev(modular, f, lambda, settings);
    const double m = rep.certificate_feasible ? rep.margin.normalized() / rep.margin.threshold + 1.0 : -inf;
    r.record(m, [&] { return Json{{"f", f.vec()}, {"lambda", lambda}, {"cap", rep.cap}, {"rhs", rep.rhs}}; });
  }
  return r;
}

}  // namespace nldf
