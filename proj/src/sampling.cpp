#include "nldf/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <utility>

namespace nldf {

Rng make_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x9e3779b9u};
  return Rng(seq);
}

double uniform(Rng& rng, double lo, double hi) {
  // Explicit mapping keeps streams identical across standard libraries.
  const double r = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * r;
}

FunctionVector random_vector(std::size_t n, Rng& rng, double scale) {
  std::vector<double> v(n);
  for (auto& x : v) x = uniform(rng, -scale, scale);
  return FunctionVector(std::move(v));
}

FunctionVector scale_into_domain(const Functional& e, const FunctionVector& u) {
  const auto dom = e.domain();
  const double t = dom.ray_limit(e.graph(), u.values());
  if (t >= 1.0) return u;
  return t * u;
}

FunctionVector random_domain_vector(const Functional& e, Rng& rng, double scale) {
  auto u = random_vector(e.graph().node_count(), rng, scale);
  const auto dom = e.domain();
  if (dom.unconstrained()) return u;
  const double r = uniform(rng, 0.0, 1.0);
  if (r < 0.15) return u;  // usually outside
  const double t = dom.ray_limit(e.graph(), u.values());
  if (!std::isfinite(t)) return u;
  if (r < 0.35) return t * u;  // on the boundary
  return (t * uniform(rng, 0.05, 1.0)) * u;
}

MeasuredGraph random_connected_graph(std::size_t n, std::size_t extra_edges, Rng& rng, double measure_lo,
                                     double measure_hi, double weight_lo, double weight_hi) {
  std::vector<double> measure(n);
  for (auto& m : measure) m = uniform(rng, measure_lo, measure_hi);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<Edge> edges;
  auto add = [&](std::size_t a, std::size_t b) {
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second) return false;
    edges.push_back({a, b, uniform(rng, weight_lo, weight_hi)});
    return true;
  };
  for (std::size_t i = 1; i < n; ++i) {
    const auto j = static_cast<std::size_t>(uniform(rng, 0.0, static_cast<double>(i)));
    add(std::min(j, i - 1), i);
  }
  const std::size_t max_edges = n * (n - 1) / 2;
  for (std::size_t k = 0; k < extra_edges && edges.size() < max_edges;) {
    const auto a = static_cast<std::size_t>(uniform(rng, 0.0, static_cast<double>(n)));
    const auto b = static_cast<std::size_t>(uniform(rng, 0.0, static_cast<double>(n)));
    if (add(std::min(a, n - 1), std::min(b, n - 1))) ++k;
  }
  return MeasuredGraph(std::move(measure), std::move(edges));
}

std::vector<std::size_t> random_subset(std::size_t n, std::size_t max_size, Rng& rng) {
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  const auto k = 1 + static_cast<std::size_t>(uniform(rng, 0.0, static_cast<double>(std::min(max_size, n))));
  for (std::size_t i = 0; i < std::min(k, n); ++i) {
    const auto j = i + static_cast<std::size_t>(uniform(rng, 0.0, static_cast<double>(n - i)));
    std::swap(all[i], all[std::min(j, n - 1)]);
  }
  all.resize(std::min(k, n));
  std::sort(all.begin(), all.end());
  return all;
}

std::vector<Functional> symmetric_catalog(const GraphPtr& g) {
  std::vector<double> exps(g->edge_count());
  for (std::size_t k = 0; k < exps.size(); ++k) exps[k] = 1.5 + 0.25 * static_cast<double>(k % 7);
  auto p2 = Functional::p_energy(g, 2.0);
  return {
      Functional::p_energy(g, 1.0),
      p2,
      Functional::p_energy(g, 3.0),
      Functional::px_energy(g, exps),
      Functional::lipschitz_indicator(g, 1.0),
      Functional::linf_ball_indicator(g, 1.0),
      Functional::lalpha_perturbation(p2, 3.0),
      Functional::scaled(p2, 2.5),
      Functional::sum({Functional::p_energy(g, 1.5), Functional::linf_ball_indicator(g, 1.0)}),
  };
}

std::vector<Functional> quasilinear_catalog(const GraphPtr& g) {
  std::vector<Functional> out;
  for (auto& f : symmetric_catalog(g))
    if (f.is_quasilinear()) out.push_back(f);
  return out;
}

}  // namespace nldf
