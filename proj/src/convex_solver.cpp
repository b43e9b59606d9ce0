#include "nldf/convex_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nldf {

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();

using ValueFn = std::function<double(std::span<const double>)>;
using GradFn = std::function<void(std::span<const double>, std::span<double>)>;

// Accelerated projected gradient, preconditioned by diag(kappa), with
// backtracking on the local Lipschitz constant and function-value restart.
// check(x, fx) runs every `every` accepted steps and on stagnation; it
// returns true to stop.
std::size_t run_fista(const ValueFn& f, const GradFn& grad, const std::vector<double>& kappa,
                      const DomainConstraints& box, std::vector<double>& x, double& fx, std::size_t max_it,
                      std::size_t every, const std::function<bool(const std::vector<double>&, double)>& check) {
  const std::size_t n = x.size();
  std::vector<double> y = x, z(n), g(n);
  double lip = 2.0, t = 1.0;
  std::size_t it = 0;
  for (it = 1; it <= max_it; ++it) {
    const double fy = f(y);
    std::fill(g.begin(), g.end(), 0.0);
    grad(y, g);
    double fz = inf;
    for (int bt = 0; bt < 200; ++bt) {
      for (std::size_t i = 0; i < n; ++i) z[i] = y[i] - g[i] / (lip * kappa[i]);
      box.project_box(z);
      fz = f(z);
      double quad = fy;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = z[i] - y[i];
        quad += g[i] * d + 0.5 * lip * kappa[i] * d * d;
      }
      if (std::isfinite(fz) && fz <= quad + 1e-15 * std::abs(fy)) break;
      lip *= 2.0;
    }
    if (!(fz <= fx) && y != x) {
      t = 1.0;  // restart momentum from the current iterate
      y = x;
      continue;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta = (t - 1.0) / t_next;
    bool moved = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (z[i] != x[i]) moved = true;
      y[i] = z[i] + beta * (z[i] - x[i]);
    }
    box.project_box(y);
    if (fz <= fx) {
      x.swap(z);
      fx = fz;
    }
    t = t_next;
    lip = std::max(2.0, lip * 0.9);
    if (!moved || it % every == 0) {
      if (check(x, fx)) break;
      if (!moved) break;
    }
  }
  return std::min(it, max_it);
}
}  // namespace

double strong_convexity_bound(double phi_x, std::span<const double> x, std::span<const double> g,
                              std::span<const double> kappa, const DomainConstraints& box) {
  double lb = phi_x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (kappa[i] <= 0.0) {
      const double lo = box.lower[i], hi = box.upper[i];
      if (g[i] > 0.0) lb += lo == -inf ? -inf : g[i] * (lo - x[i]);
      else if (g[i] < 0.0) lb += hi == inf ? -inf : g[i] * (hi - x[i]);
      continue;
    }
    const double y = std::clamp(x[i] - g[i] / (2.0 * kappa[i]), box.lower[i], box.upper[i]);
    const double d = y - x[i];
    lb += g[i] * d + kappa[i] * d * d;
  }
  return lb;
}

DescentResult minimize_on_box(const BoxObjective& phi, const DomainConstraints& box, std::vector<double> x0,
                              const DescentSettings& settings, const std::function<bool(double, double)>& stop) {
  const std::size_t n = x0.size();
  DescentResult res;
  std::vector<double> x = std::move(x0);
  box.project_box(x);
  double fx = phi.value(x).value();
  std::vector<double> kappa = phi.kappa;
  for (auto& k : kappa) k = std::max(k, 1e-300);
  const std::size_t every = std::max<std::size_t>(1, settings.bound_every);

  double best_lb = -inf;
  auto gap_closed = [&](double value) {
    return std::isfinite(value) && value - best_lb <= settings.tolerance * std::max(1.0, std::abs(value));
  };
  auto finish = [&](std::size_t iterations) {
    res.x = std::move(x);
    res.value = fx;
    res.lower_bound = best_lb;
    res.iterations = iterations;
    return res;
  };
  if (!std::isfinite(fx)) return finish(0);

  std::vector<double> gx(n);
  auto true_bound = [&](const std::vector<double>& at, double f_at) {
    std::fill(gx.begin(), gx.end(), 0.0);
    phi.subgradient(at, gx);
    best_lb = std::max(best_lb, strong_convexity_bound(f_at, at, gx, phi.kappa, box));
  };
  // Returns true when the run should end.
  auto judge = [&](double value) {
    if (gap_closed(value)) {
      res.converged = true;
      return true;
    }
    if (stop && stop(value, best_lb)) {
      res.stopped_early = true;
      return true;
    }
    return false;
  };

  if (phi.smooth || !phi.smoothed) true_bound(x, fx);
  if (judge(fx)) return finish(0);

  if (phi.smooth) {
    const auto it = run_fista(
        [&](std::span<const double> u) { return phi.value(u).value(); }, phi.subgradient, kappa, box, x, fx,
        settings.max_iterations, every, [&](const std::vector<double>& at, double f_at) {
          true_bound(at, f_at);
          return judge(f_at);
        });
    return finish(it);
  }

  if (phi.smoothed) {
    std::vector<double> gm(n);
    // Certified bound at a point from the smoothing model.
    auto model_bound = [&](const std::vector<double>& at, double mu) {
      std::fill(gm.begin(), gm.end(), 0.0);
      const auto [fm, model] = phi.smoothed(at, mu, gm);
      best_lb = std::max(best_lb, strong_convexity_bound(model, at, gm, phi.kappa, box));
      return std::make_pair(fm, strong_convexity_bound(fm, at, gm, phi.kappa, box));
    };
    std::size_t used = 0;
    bool done = false;
    std::vector<double> best_x = x;
    double best_f = fx;
    auto offer = [&](const std::vector<double>& at, double f_true) {
      if (f_true < best_f) {
        best_f = f_true;
        best_x = at;
      }
    };
    for (double mu = settings.mu_start; !done && used < settings.max_iterations; mu *= 0.1) {
      const bool last = mu * 0.1 < settings.mu_min;
      double fm = phi.smoothed(x, mu, gx).first;
      const auto fmu = [&, mu](std::span<const double> u) {
        std::vector<double> scratch(u.size());
        return phi.smoothed(u, mu, scratch).first;
      };
      const auto gmu = [&, mu](std::span<const double> u, std::span<double> out) { phi.smoothed(u, mu, out); };
      used += run_fista(fmu, gmu, kappa, box, x, fm, settings.max_iterations - used, every,
                        [&](const std::vector<double>& at, double) {
                          const double f_true = phi.value(at).value();
                          const auto [f_mu, lb_mu] = model_bound(at, mu);
                          offer(at, f_true);
                          if (judge(best_f)) {
                            done = true;
                            return true;
                          }
                          // Move to a smaller mu once smoothing error dominates.
                          return !last && f_mu - lb_mu <= std::max(f_true - f_mu, 1e-3 * settings.tolerance);
                        });
      offer(x, phi.value(x).value());
      model_bound(x, mu);
      if (!done && judge(best_f)) done = true;
      if (last) break;
    }
    x = std::move(best_x);
    fx = best_f;
    return finish(used);
  }

  // Projected subgradient with diminishing steps; keeps the best point.
  std::vector<double> cur = x, g(n);
  // Strong convexity puts the minimizer within sqrt(f - lb) in the kappa norm.
  double c = std::sqrt(fx - best_lb);
  if (!std::isfinite(c) || c <= 0.0) {
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale += kappa[i] * cur[i] * cur[i];
    c = 0.25 * std::max(1e-3, std::sqrt(scale));
  }
  std::size_t it = 0;
  for (it = 1; it <= settings.max_iterations; ++it) {
    std::fill(g.begin(), g.end(), 0.0);
    phi.subgradient(cur, g);
    double gnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) gnorm += g[i] * g[i] / kappa[i];
    gnorm = std::sqrt(gnorm);
    if (gnorm == 0.0) break;
    const double step = c / std::sqrt(static_cast<double>(it));
    for (std::size_t i = 0; i < n; ++i) cur[i] -= step * g[i] / (kappa[i] * gnorm);
    box.project_box(cur);
    const double fc = phi.value(cur).value();
    if (fc < fx) {
      fx = fc;
      x = cur;
    }
    if (it % every == 0) {
      true_bound(cur, fc);
      if (judge(fx)) break;
    }
  }
  true_bound(x, fx);
  if (gap_closed(fx)) res.converged = true;
  return finish(std::min(it, settings.max_iterations));
}

}  // namespace nldf
