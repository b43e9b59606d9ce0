#include "nldf/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "nldf/generators.hpp"

namespace nldf {

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();

Margin pair_margin(const Functional& e, const FunctionVector& u, const FunctionVector& v, const FunctionVector& x,
                   const FunctionVector& y) {
  const ExtReal rhs = e(u) + e(v);
  const ExtReal lhs = e(x) + e(y);
  Margin m;
  m.value = margin_of(rhs, lhs);
  m.scale = rhs.finite() ? std::max(1.0, rhs.value()) : 1.0;
  return m;
}

double log_uniform(Rng& rng, double lo, double hi) { return std::exp(uniform(rng, std::log(lo), std::log(hi))); }

Json vec_json(const FunctionVector& u) { return Json(u.vec()); }

Json contraction_json(const NormalContraction& p) {
  return Json{{"breakpoints", p.breakpoints()}, {"slopes", p.slopes()}};
}

void require_symmetric(const Functional& e, const char* what) {
  if (!e.is_symmetric()) throw InputError(std::string(what) + " requires a symmetric functional");
}
}  // namespace

Margin check_lattice_inequality(const Functional& e, const FunctionVector& u, const FunctionVector& v) {
  return pair_margin(e, u, v, lattice_min(u, v), lattice_max(u, v));
}

Margin check_truncation_inequality(const Functional& e, const FunctionVector& u, const FunctionVector& v,
                                   double alpha) {
  const auto q = stieltjes_midpoint(u, v, alpha);
  return pair_margin(e, u, v, v + q, u - q);
}

Margin check_beurling_deny(const Functional& e, const FunctionVector& u, const FunctionVector& v,
                           const NormalContraction& p) {
  require_same_size(u, v);
  const auto q = p.apply(u - v);
  return pair_margin(e, u, v, u - q, v + q);
}

DirichletSweepReport verify_dirichlet(const Functional& e, std::size_t samples, std::size_t contraction_samples,
                                      std::uint64_t seed, const DirichletThresholds& th) {
  DirichletSweepReport rep;
  auto init = [&](VerificationReport& r, const char* name) {
    r.check = name;
    r.threshold = th.inequality;
    r.seed = seed;
  };
  init(rep.lattice, "lattice_inequality");
  init(rep.truncation, "truncation_inequality");
  init(rep.contraction, "beurling_deny");
  init(rep.converse, "contraction_converse");

  for (std::size_t s = 0; s < std::max(samples, contraction_samples); ++s) {
    auto rng = make_stream(seed, s);
    const double scale = log_uniform(rng, 0.1, 10.0);
    const auto u = random_domain_vector(e, rng, scale);
    const auto v = random_domain_vector(e, rng, scale);
    if (s < samples) {
      const double alpha = log_uniform(rng, 1e-3, 10.0) * scale;
      const auto ml = check_lattice_inequality(e, u, v);
      rep.lattice.record(ml.normalized(), [&] { return Json{{"u", vec_json(u)}, {"v", vec_json(v)}}; });
      const auto mt = check_truncation_inequality(e, u, v, alpha);
      rep.truncation.record(mt.normalized(), [&] {
        return Json{{"u", vec_json(u)}, {"v", vec_json(v)}, {"alpha", alpha}};
      });
      // Converse direction: the same margins come out of the contraction form.
      const auto bl = check_beurling_deny(e, u, v, NormalContraction::positive_part());
      const auto bt = check_beurling_deny(e, u, v, NormalContraction::truncation_midpoint(alpha));
      auto gap = [](const Margin& a, const Margin& b) {
        if (!std::isfinite(a.value) || !std::isfinite(b.value)) return a.value == b.value ? 0.0 : -inf;
        return -std::abs(a.value - b.value) / a.scale;
      };
      rep.converse.record(std::min(gap(ml, bl), gap(mt, bt)), [&] {
        return Json{{"u", vec_json(u)}, {"v", vec_json(v)}, {"alpha", alpha}};
      });
    }
    if (s < contraction_samples) {
      const double range = 4.0 * std::max({u.sup_norm(), v.sup_norm(), 1e-12});
      const auto p = sample_normal_contraction(rng, range);
      const auto mc = check_beurling_deny(e, u, v, p);
      rep.contraction.record(mc.normalized(), [&] {
        return Json{{"u", vec_json(u)}, {"v", vec_json(v)}, {"contraction", contraction_json(p)}};
      });
    }
  }
  return rep;
}

RieszReport check_riesz_closure(const ModularProblem& prob, const FunctionVector& u, const FunctionVector& v) {
  RieszReport r;
  r.precondition = in_energy_space(prob, u) && in_energy_space(prob, v);
  r.min_in_space = in_energy_space(prob, lattice_min(u, v));
  r.max_in_space = in_energy_space(prob, lattice_max(u, v));
  return r;
}

Margin check_lattice_norm_bound(const ModularProblem& prob, const FunctionVector& u, const FunctionVector& v) {
  require_symmetric(prob.functional(), "the lattice norm bound");
  const double nu = energy_norm(prob, u).v(), nv = energy_norm(prob, v).v();
  const double nm = energy_norm(prob, lattice_min(u, v)).v();
  Margin m;
  if (!std::isfinite(nu) || !std::isfinite(nv)) {
    m.value = inf;
    return m;
  }
  m.value = nu + nv - nm;
  m.scale = nu + nv > 0.0 ? nu + nv : 1.0;
  return m;
}

VerificationReport sweep_lattice_norm_bound(const ModularProblem& prob, std::size_t samples, std::uint64_t seed) {
  VerificationReport r;
  r.check = "lattice_norm_bound";
  r.threshold = prob.check_tol();
  r.seed = seed;
  const auto& e = prob.functional();
  for (std::size_t s = 0; s < samples; ++s) {
    auto rng = make_stream(seed, s);
    const double scale = log_uniform(rng, 0.05, 20.0);
    auto u = random_domain_vector(e, rng, scale);
    auto v = random_domain_vector(e, rng, scale);
    if (!in_energy_space(prob, u) || !in_energy_space(prob, v)) continue;
    const auto m = check_lattice_norm_bound(prob, u, v);
    r.record(m.normalized(), [&] { return Json{{"u", vec_json(u)}, {"v", vec_json(v)}}; });
  }
  return r;
}

LinfCounterexample run_linf_counterexample(std::size_t n, const DirichletThresholds& th) {
  if (n < 2 || n % 2 != 0) throw InputError("the L-infinity counterexample needs an even n >= 2");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
  auto g = std::make_shared<const MeasuredGraph>(std::vector<double>(n, 1.0 / static_cast<double>(n)), edges);
  const ModularProblem prob(Functional::linf_ball_indicator(g, 1.0));
  std::vector<double> fv(n);
  for (std::size_t i = 0; i < n; ++i) fv[i] = i < n / 2 ? -1.0 : 1.0;
  const FunctionVector f(fv), zero = FunctionVector::zeros(n);

  LinfCounterexample r;
  r.n = n;
  r.norm_f = energy_norm(prob, f).v();
  r.norm_min = energy_norm(prob, lattice_min(f, zero)).v();
  r.norm_max = energy_norm(prob, lattice_max(f, zero)).v();
  r.norm_zero = energy_norm(prob, zero).v();
  r.l2_f = l2_norm(*g, f);
  r.sup_f = f.sup_norm();
  r.lhs = r.norm_min + r.norm_max;
  r.rhs = r.norm_f + r.norm_zero;
  const double eps = th.counterexample;
  r.pass = std::abs(r.lhs - 2.0) <= eps && std::abs(r.rhs - 1.0) <= eps && r.lhs > r.rhs;
  return r;
}

LipschitzCounterexample run_lipschitz_counterexample(std::size_t n, std::size_t k_max, bool kink_aligned,
                                                     const DirichletThresholds& th) {
  if (n < 2) throw InputError("the Lipschitz counterexample needs n >= 2");
  if (k_max < 1) throw InputError("k_max must be at least 1");
  LipschitzCounterexample r;
  r.n = n;
  r.kink_aligned = kink_aligned;
  r.min_f_min_g = inf;
  const double h = 1.0 / static_cast<double>(n - 1);
  std::vector<double> uniform_x(n);
  for (std::size_t i = 0; i < n; ++i) uniform_x[i] = static_cast<double>(i) * h;
  uniform_x.back() = 1.0;

  std::shared_ptr<const ModularProblem> uniform_prob;
  if (!kink_aligned)
    uniform_prob = std::make_shared<const ModularProblem>(
        Functional::lipschitz_indicator(std::make_shared<const MeasuredGraph>(path_from_positions(uniform_x)), 1.0));

  bool ok = true;
  for (std::size_t k = 1; k <= k_max; ++k) {
    const double kink = 1.0 / static_cast<double>(k);
    std::vector<double> x = uniform_x;
    std::shared_ptr<const ModularProblem> prob = uniform_prob;
    if (kink_aligned) {
      auto j = static_cast<std::size_t>(std::llround(static_cast<double>(n - 1) * kink));
      j = std::clamp<std::size_t>(j, 1, n - 1);
      x[j] = kink;
      prob = std::make_shared<const ModularProblem>(
          Functional::lipschitz_indicator(std::make_shared<const MeasuredGraph>(path_from_positions(x)), 1.0));
    }
    const FunctionVector f(x);
    const auto g = FunctionVector::constant(n, kink);
    LipschitzRow row;
    row.k = k;
    row.kink_position = kink;
    row.norm_g = energy_norm(*prob, g).v();
    row.norm_f_min_g = energy_norm(*prob, lattice_min(f, g)).v();
    r.worst_g_ratio = std::max(r.worst_g_ratio, row.norm_g * static_cast<double>(k) / 2.0);
    r.min_f_min_g = std::min(r.min_f_min_g, row.norm_f_min_g);
    if (row.norm_g > 2.0 * kink * (1.0 + prob->check_tol())) ok = false;
    if (row.norm_f_min_g < 1.0 - th.counterexample) ok = false;
    r.rows.push_back(row);
  }
  r.pass = ok;
  return r;
}

ContinuityReport check_lattice_continuity(const ModularProblem& prob, const FunctionVector& u,
                                          const FunctionVector& v, const FunctionVector& wu,
                                          const FunctionVector& wv, std::size_t N,
                                          const DirichletThresholds& th) {
  const auto& e = prob.functional();
  if (!e.is_quasilinear() || !e.is_symmetric())
    throw InputError(
        "lattice continuity needs a symmetric functional whose domain is a linear subspace; "
        "for the slope-bound indicator see the Lipschitz counterexample");
  if (N < 1) throw InputError("sequence length must be at least 1");
  ContinuityReport r;
  const auto lo = lattice_min(u, v), hi = lattice_max(u, v);
  for (std::size_t n = 1; n <= N; ++n) {
    const double s = 1.0 / static_cast<double>(n);
    const auto un = u + s * wu, vn = v + s * wv;
    r.min_tail.push_back(energy_norm(prob, lattice_min(un, vn) - lo).v());
    r.max_tail.push_back(energy_norm(prob, lattice_max(un, vn) - hi).v());
  }
  auto noisy_increase = [](double prev, double next) { return next > prev * (1.0 + 1e-9) + 1e-14; };
  bool tail_monotone = true;
  for (std::size_t i = 1; i < N; ++i) {
    const bool bad_min = noisy_increase(r.min_tail[i - 1], r.min_tail[i]);
    const bool bad_max = noisy_increase(r.max_tail[i - 1], r.max_tail[i]);
    if (bad_min || bad_max) {
      ++r.monotone_violations;
      if (i >= N / 2) tail_monotone = false;
    }
  }
  r.final_min = r.min_tail.back();
  r.final_max = r.max_tail.back();
  r.pass = tail_monotone && r.final_min <= th.continuity_tail && r.final_max <= th.continuity_tail;
  return r;
}

CutoffReport check_cutoff(const ModularProblem& prob, const FunctionVector& u, const std::vector<double>& cs,
                          const DirichletThresholds& th) {
  require_symmetric(prob.functional(), "the cutoff check");
  CutoffReport r;
  const ExtReal e1 = eval_E1(prob, u);
  const double sup = u.sup_norm();
  for (double c : cs) {
    const auto t = truncate(u, c);
    CutoffRow row;
    row.c = c;
    row.e1 = e1.value();
    row.e1_truncated = eval_E1(prob, t).value();
    const Margin m{margin_of(e1, ExtReal(row.e1_truncated)), e1.finite() ? std::max(1.0, e1.value()) : 1.0};
    if (!m.pass(th.inequality)) r.energy_pass = false;
    row.distance = energy_norm(prob, t - u).v();
    if (c >= sup && row.distance != 0.0) r.convergence_pass = false;
    r.rows.push_back(row);
  }
  return r;
}

ShiftedMinReport check_corollary_shifted_min(const ModularProblem& prob, const FunctionVector& u,
                                             const FunctionVector& g, double c) {
  if (!(c > 0.0)) throw InputError("c must be positive");
  require_same_size(u, g);
  ShiftedMinReport r;
  r.precondition = in_energy_space(prob, u) && in_energy_space(prob, g);
  const auto cvec = FunctionVector::constant(u.size(), c);
  const auto lhs = lattice_min(u, cvec - g);
  const auto rhs = lattice_min(u + g, cvec) - g;
  r.membership = in_energy_space(prob, lhs);
  r.identity_error = (lhs - rhs).sup_norm() / std::max({1.0, u.sup_norm(), g.sup_norm(), c});
  return r;
}

}  // namespace nldf
