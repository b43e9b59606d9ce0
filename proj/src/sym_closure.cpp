#include "nldf/sym_closure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nldf/sampling.hpp"

namespace nldf {

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Gradient (some subgradient) of E_1 at x: 2 M x + dE(x).
std::vector<double> grad_E1(const ModularProblem& mp, std::span<const double> x) {
  std::vector<double> g(x.size());
  auto m = mp.graph().measure();
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * m[i] * x[i];
  mp.functional().add_subgradient(x, g);
  return g;
}

// Upper bound on the conjugate E_1^*(g) = sup_y <g, y> - E_1(y) from one
// point x in dom E, using E_1(y) >= E_1(x) + <s, y - x> + sum m (y - x)^2.
double conj_upper(const ModularProblem& mp, const DomainConstraints& dom, std::span<const double> g,
                  std::span<const double> x) {
  const ExtReal ex = mp.E1(x);
  if (ex.infinite()) return inf;
  auto s = grad_E1(mp, x);
  auto m = mp.graph().measure();
  for (std::size_t i = 0; i < s.size(); ++i) s[i] -= g[i];
  const std::vector<double> kappa(m.begin(), m.end());
  // min over the box of <s, d> + sum m d^2 is the bound below with phi_x = 0
  const double min_quad = strong_convexity_bound(0.0, x, s, kappa, dom);
  return dot(g, x) - ex.value() - min_quad;
}

struct Inner {
  double value = inf;
  std::vector<double> u;
  bool converged = true;
};

class InnerSolver {
 public:
  InnerSolver(const SymClosureProblem& prob, const FunctionVector& f)
      : prob_(prob), mp_(prob.base()), f_(f.values()), dom_(mp_.functional().domain()) {}

  const DomainConstraints& domain() const { return dom_; }

  // Box for u = lambda a at an interior lambda.
  DomainConstraints box(double lam) const {
    const std::size_t n = f_.size();
    DomainConstraints b(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double l = dom_.lower[i], h = dom_.upper[i];
      const double lo = std::max(l == -inf ? -inf : lam * l, l == -inf ? -inf : f_[i] + (1.0 - lam) * l);
      const double hi = std::min(h == inf ? inf : lam * h, h == inf ? inf : f_[i] + (1.0 - lam) * h);
      if (lo > hi) b.lower[i] = b.upper[i] = 0.5 * (lo + hi);  // rounding at a degenerate lambda
      else {
        b.lower[i] = lo;
        b.upper[i] = hi;
      }
    }
    return b;
  }

  double G(double lam, std::span<const double> u) const {
    const std::size_t n = u.size();
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = u[i] / lam;
      b[i] = (u[i] - f_[i]) / (1.0 - lam);
    }
    const ExtReal ea = mp_.E1(a), eb = mp_.E1(b);
    if (ea.infinite() || eb.infinite()) return inf;
    return lam * ea.value() + (1.0 - lam) * eb.value();
  }

  Inner solve(double lam, const std::vector<double>* warm) const {
    const std::size_t n = f_.size();
    const auto b = box(lam);
    auto m = mp_.graph().measure();
    BoxObjective phi;
    phi.smooth = mp_.functional().is_smooth();
    phi.kappa.resize(n);
    for (std::size_t i = 0; i < n; ++i) phi.kappa[i] = m[i] / lam + m[i] / (1.0 - lam);
    phi.value = [this, lam](std::span<const double> u) { return ExtReal(G(lam, u)); };
    phi.subgradient = [this, lam, n](std::span<const double> u, std::span<double> out) {
      std::vector<double> a(n), bb(n);
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = u[i] / lam;
        bb[i] = (u[i] - f_[i]) / (1.0 - lam);
      }
      const auto ga = grad_E1(mp_, a), gb = grad_E1(mp_, bb);
      for (std::size_t i = 0; i < n; ++i) out[i] += ga[i] + gb[i];
    };

    if (!phi.smooth) {
      phi.smoothed = [this, lam, n](std::span<const double> u, double mu, std::span<double> out) {
        std::vector<double> a(n), bb(n);
        for (std::size_t i = 0; i < n; ++i) {
          a[i] = u[i] / lam;
          bb[i] = (u[i] - f_[i]) / (1.0 - lam);
        }
        const auto& e = mp_.functional();
        const auto sa = e.smoothed(a, mu, out), sb = e.smoothed(bb, mu, out);
        const double qa = l2_norm_squared(mp_.graph(), a), qb = l2_norm_squared(mp_.graph(), bb);
        auto m = mp_.graph().measure();
        for (std::size_t i = 0; i < n; ++i) out[i] += 2.0 * m[i] * (a[i] + bb[i]);
        if (sa.smoothed.infinite() || sb.smoothed.infinite()) return std::make_pair(inf, inf);
        return std::make_pair(lam * (qa + sa.smoothed.value()) + (1.0 - lam) * (qb + sb.smoothed.value()),
                              lam * (qa + sa.model.value()) + (1.0 - lam) * (qb + sb.model.value()));
      };
    }

    std::vector<std::vector<double>> starts;
    if (warm) starts.push_back(*warm);
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = lam * f_[i];
    starts.push_back(s);
    starts.emplace_back(f_.begin(), f_.end());
    starts.emplace_back(n, 0.0);
    std::vector<double> best;
    double best_val = inf;
    for (auto& x : starts) {
      b.project_box(x);
      const double v = G(lam, x);
      if (v < best_val) {
        best_val = v;
        best = x;
      }
    }
    Inner r;
    if (!std::isfinite(best_val)) return r;
    auto res = minimize_on_box(phi, b, best, prob_.settings().inner);
    r.value = res.value;
    r.u = std::move(res.x);
    r.converged = res.converged;
    return r;
  }

 private:
  const SymClosureProblem& prob_;
  const ModularProblem& mp_;
  std::span<const double> f_;
  DomainConstraints dom_;
};

}  // namespace

SymClosureProblem::SymClosureProblem(ModularProblem base, SymSettings settings)
    : base_(std::move(base)), settings_(settings) {
  const std::size_t n = graph().node_count();
  if (functional()(FunctionVector::zeros(n)) != ExtReal(0.0)) throw InputError("sym closure needs E(0) = 0");
  if (settings_.lambda_grid_size < 3) throw InputError("lambda_grid_size must be at least 3");
}

std::pair<double, double> sym_lambda_range(const SymClosureProblem& prob, const FunctionVector& f) {
  require_same_size(prob.graph(), f.values());
  const auto dom = prob.functional().domain();
  double lo = 0.0, hi = 1.0;
  // c * lambda <= d
  auto add = [&](double c, double d) {
    if (c > 0.0) hi = std::min(hi, d / c);
    else if (c < 0.0) lo = std::max(lo, d / c);
    else if (d < 0.0) {
      lo = 1.0;
      hi = 0.0;
    }
  };
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double l = dom.lower[i], h = dom.upper[i];
    if (l == -inf || h == inf) continue;
    add(l + h, f[i] + h);     // lambda l <= f + (1 - lambda) h
    add(-(h + l), -(f[i] + l));  // f + (1 - lambda) l <= lambda h
  }
  return {lo, hi};
}

bool sym_domain_contains(const SymClosureProblem& prob, const FunctionVector& f) {
  const auto& g = prob.graph();
  const auto dom = prob.functional().domain();
  if (dom.contains(g, f.values(), indicator_tolerance)) return true;
  if (dom.contains(g, (-f).values(), indicator_tolerance)) return true;
  if (dom.has_slopes()) return false;
  const auto [lo, hi] = sym_lambda_range(prob, f);
  return lo <= hi + 1e-13;
}

SymValue sym_eval(const SymClosureProblem& prob, const FunctionVector& f) {
  const auto& mp = prob.base();
  require_same_size(mp.graph(), f.values());
  const std::size_t n = f.size();
  SymValue out;
  out.u = FunctionVector::zeros(n);
  out.v = FunctionVector::zeros(n);
  if (f.is_zero()) {
    out.value = 0.0;
    out.lambda = 1.0;
    return out;
  }

  InnerSolver solver(prob, f);
  double best = inf;
  std::vector<double> best_u;
  auto consider = [&](double lam, double val, std::vector<double> u) {
    if (val < best) {
      best = val;
      best_u = std::move(u);
      out.lambda = lam;
    }
  };
  // Degenerate weights: lambda = 1 gives E_1(f), lambda = 0 gives E_1(-f).
  consider(1.0, mp.E1(f.values()).value(), f.vec());
  consider(0.0, mp.E1((-f).values()).value(), std::vector<double>(n, 0.0));

  if (!solver.domain().has_slopes()) {
    auto [lo, hi] = sym_lambda_range(prob, f);
    if (lo > hi && lo - hi <= 1e-13) lo = hi = 0.5 * (lo + hi);
    lo = std::max(lo, 0.0);
    hi = std::min(hi, 1.0);
    if (lo <= hi) {
      const std::size_t N = prob.settings().lambda_grid_size;
      std::vector<double> grid;
      if (hi - lo < 1e-12) grid.push_back(0.5 * (lo + hi));
      else
        for (std::size_t k = 0; k < N; ++k) grid.push_back(lo + (hi - lo) * (static_cast<double>(k) + 0.5) / N);
      std::vector<double> vals(grid.size(), inf);
      std::vector<std::vector<double>> sols(grid.size());
      const std::vector<double>* warm = nullptr;
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const double lam = grid[k];
        if (lam <= 0.0 || lam >= 1.0) continue;
        auto r = solver.solve(lam, warm);
        ++out.inner_solves;
        out.converged = out.converged && r.converged;
        vals[k] = r.value;
        sols[k] = r.u;
        if (std::isfinite(r.value)) warm = &sols[k];
        consider(lam, r.value, r.u);
      }
      // Golden-section refinement: the hull infimum is convex in lambda.
      const auto kbest = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
      if (grid.size() > 1 && std::isfinite(vals[kbest])) {
        double a = kbest == 0 ? lo : grid[kbest - 1];
        double b = kbest + 1 == grid.size() ? hi : grid[kbest + 1];
        a = std::max(a, 1e-12);
        b = std::min(b, 1.0 - 1e-12);
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        std::vector<double> ws = sols[kbest];
        auto eval_at = [&](double lam) {
          auto r = solver.solve(lam, &ws);
          ++out.inner_solves;
          out.converged = out.converged && r.converged;
          if (std::isfinite(r.value)) ws = r.u;
          consider(lam, r.value, r.u);
          return r.value;
        };
        double c = b - phi * (b - a), d = a + phi * (b - a);
        double fc = eval_at(c), fd = eval_at(d);
        for (std::size_t it = 0; it < prob.settings().refine_steps && b - a > 1e-12; ++it) {
          if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = eval_at(c);
          } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = eval_at(d);
          }
        }
      }
    }
  }

  if (!std::isfinite(best)) {
    out.value = ExtReal::infinity();
    out.lower = 0.0;
    return out;
  }
  out.value = best;
  out.u = FunctionVector(best_u);
  out.v = out.u - f;

  // Lower bound: affine minorant <g, .> - max(E_1^*(g), E_1^*(-g)) with the
  // slope g taken from the optimality condition of the decomposition.
  const double lam = out.lambda;
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = lam > 0.0 ? out.u[i] / lam : f[i];
    b[i] = lam < 1.0 ? out.v[i] / (1.0 - lam) : -f[i];
  }
  std::vector<double> g;
  if (lam > 0.0) g = grad_E1(mp, a);
  else {
    g = grad_E1(mp, b);
    for (auto& x : g) x = -x;
  }
  const auto dom = solver.domain();
  std::vector<double> mg(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) mg[i] = -g[i];
  auto neg = [](std::vector<double> x) {
    for (auto& y : x) y = -y;
    return x;
  };
  const std::vector<double> fv = f.vec(), zero(n, 0.0);
  auto best_conj = [&](std::span<const double> slope, const std::vector<std::vector<double>>& pts) {
    double c = inf;
    for (const auto& x : pts) c = std::min(c, conj_upper(mp, dom, slope, x));
    return c;
  };
  const double cplus = best_conj(g, {a, neg(b), fv, zero});
  const double cminus = best_conj(mg, {b, neg(a), neg(fv), zero});
  double lb = l2_norm_squared(mp.graph(), f.values());
  const double affine = dot(g, f.values()) - std::max(cplus, cminus);
  if (std::isfinite(affine)) lb = std::max(lb, affine);
  out.lower = std::min(lb, best);
  return out;
}

SymDecomposition sym_decompose(const SymClosureProblem& prob, const FunctionVector& f) {
  const auto s = sym_eval(prob, f);
  if (s.value.infinite()) throw InputError("f is outside dom(sym E); no decomposition exists");
  SymDecomposition d;
  d.u = s.u;
  d.v = s.v;
  d.lambda = s.lambda;
  d.residual = l2_norm(prob.graph(), f - (d.u - d.v));
  const auto& e = prob.functional();
  d.u_in_domain = e(d.u).finite();
  d.v_in_domain = e(d.v).finite();
  return d;
}

SpanDomainReport span_domain_check(const SymClosureProblem& prob, std::size_t samples, std::uint64_t seed) {
  SpanDomainReport rep;
  rep.report.check = "span_domain";
  rep.report.seed = seed;
  const auto& e = prob.functional();
  for (std::size_t s = 0; s < samples; ++s) {
    auto rng = make_stream(seed, s);
    const auto u = scale_into_domain(e, random_domain_vector(e, rng, uniform(rng, 0.1, 3.0)));
    const auto v = scale_into_domain(e, random_domain_vector(e, rng, uniform(rng, 0.1, 3.0)));
    const auto f = u - v;
    double t = 1.0;
    if (!sym_domain_contains(prob, f)) {
      double lo = 0.0, hi = 1.0;
      t = 0.5;
      for (int k = 0; k < 200 && !sym_domain_contains(prob, t * f); ++k) {
        hi = t;
        t *= 0.5;
      }
      lo = t;
      for (int k = 0; k < 50; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (sym_domain_contains(prob, mid * f)) lo = mid;
        else hi = mid;
      }
      t = lo;
    }
    rep.scalings.push_back(t);
    bool ok = t > 0.0 && sym_domain_contains(prob, t * f);
    if (ok) ok = sym_decompose(prob, t * f).certified();
    rep.report.record(ok ? 0.0 : -1.0, [&] {
      return Json{{"u", u.vec()}, {"v", v.vec()}, {"t", t}};
    });
  }
  return rep;
}

NormValue sym_energy_norm(const SymClosureProblem& prob, const FunctionVector& f) {
  const auto& mp = prob.base();
  require_same_size(mp.graph(), f.values());
  bool in_space = f.is_zero();
  if (!in_space) {
    // Some multiple of f must reach dom(sym E).
    double t = 1.0;
    for (int k = 0; k < mp.settings().bracket_cap && !in_space; ++k, t *= 0.5) in_space = sym_domain_contains(prob, t * f);
  }
  Modular rho = [&prob](std::span<const double> x) {
    return sym_eval(prob, FunctionVector(std::vector<double>(x.begin(), x.end()))).value;
  };
  return luxemburg_gauge(rho, f.values(), 1.0, l2_norm(mp.graph(), f), mp.settings(), in_space);
}

}  // namespace nldf
