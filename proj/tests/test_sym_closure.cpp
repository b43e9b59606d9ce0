#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "nldf/sampling.hpp"
#include "nldf/sym_closure.hpp"

using namespace nldf;

namespace {
// Separable closed form for E = box[0,1] indicator (E_1 = ||.||^2 on the
// box): for fixed lambda each node solves min u^2/l + (u - f)^2/(1 - l) over
// u in [max(0, f), min(l, f + 1 - l)], minimized at clamp(l f).
double box_oracle(const MeasuredGraph& g, const FunctionVector& f) {
  double best = std::numeric_limits<double>::infinity();
  const int steps = 200000;
  for (int k = 1; k < steps; ++k) {
    const double l = static_cast<double>(k) / steps;
    double total = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double lo = std::max(0.0, f[i]), hi = std::min(l, f[i] + 1 - l);
      if (lo > hi) {
        total = std::numeric_limits<double>::infinity();
        break;
      }
      const double u = std::clamp(l * f[i], lo, hi);
      total += g.measure(i) * (u * u / l + (u - f[i]) * (u - f[i]) / (1 - l));
    }
    best = std::min(best, total);
  }
  // lambda in {0, 1}
  bool pos = true, neg = true;
  double sq = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    pos = pos && f[i] >= 0 && f[i] <= 1;
    neg = neg && f[i] <= 0 && f[i] >= -1;
    sq += g.measure(i) * f[i] * f[i];
  }
  if (pos || neg) best = std::min(best, sq);
  return best;
}

SymClosureProblem box_problem(const GraphPtr& g) {
  return SymClosureProblem(ModularProblem(Functional::box_indicator(g, 0.0, 1.0)));
}
}  // namespace

TEST_CASE("symmetric base: closure equals E1") {
  auto rng = make_stream(2, 0);
  auto g = testing::share(random_connected_graph(6, 3, rng));
  for (const auto& e : symmetric_catalog(g)) {
    SymClosureProblem prob{ModularProblem(e)};
    CAPTURE(e.describe());
    for (int s = 0; s < 5; ++s) {
      auto f = random_domain_vector(e, rng, 1.0);
      const auto e1 = prob.base().E1(f.values());
      const auto sv = sym_eval(prob, f);
      if (e1.infinite()) {
        CHECK(sv.value.infinite());
        continue;
      }
      CHECK(sv.value.value() == doctest::Approx(e1.value()).epsilon(1e-6));
      if (!sv.value.finite()) continue;
      auto d = sym_decompose(prob, f);
      CHECK(d.certified());
    }
  }
}

TEST_CASE("zero decomposes trivially") {
  auto g = testing::measured({1.0, 1.0});
  auto prob = box_problem(g);
  CHECK(sym_eval(prob, FunctionVector::zeros(2)).value.value() == 0.0);
  auto d = sym_decompose(prob, FunctionVector::zeros(2));
  CHECK(d.u.is_zero());
  CHECK(d.v.is_zero());
}

TEST_CASE("box example: domain and values against the separable oracle") {
  auto g = testing::measured({0.7, 1.3});
  auto prob = box_problem(g);
  SUBCASE("domain is {max f+ + max f- <= 1}") {
    CHECK(sym_domain_contains(prob, FunctionVector({0.5, -0.5})));
    CHECK(sym_domain_contains(prob, FunctionVector({0.3, -0.7})));
    CHECK_FALSE(sym_domain_contains(prob, FunctionVector({0.6, -0.6})));
    CHECK_FALSE(sym_domain_contains(prob, FunctionVector({1.0, -1.0})));  // corner of [-1, 1]^2
    CHECK(sym_domain_contains(prob, FunctionVector({1.0, 0.2})));
    CHECK(sym_eval(prob, FunctionVector({1.0, -1.0})).value.infinite());
  }
  SUBCASE("values") {
    auto rng = make_stream(2, 1);
    for (int s = 0; s < 20; ++s) {
      FunctionVector f({uniform(rng, -1, 1), uniform(rng, -1, 1)});
      if (!sym_domain_contains(prob, f)) continue;
      const double oracle = box_oracle(*g, f);
      const auto sv = sym_eval(prob, f);
      CAPTURE(f.vec());
      REQUIRE(sv.value.finite());
      CHECK(sv.value.value() == doctest::Approx(oracle).epsilon(1e-6));
      CHECK(sv.lower <= sv.value.value() + 1e-12);
    }
  }
}

TEST_CASE("box example: decomposition certificate") {
  auto g = testing::measured({1.0, 1.0});
  auto prob = box_problem(g);
  auto d = sym_decompose(prob, FunctionVector({0.5, -0.5}));
  CHECK(d.certified());
  CHECK(d.u_in_domain);
  CHECK(d.v_in_domain);
  auto box = Functional::box_indicator(g, 0.0, 1.0);
  CHECK(box(d.u).finite());
  CHECK(box(d.v).finite());
  CHECK_THROWS_AS(sym_decompose(prob, FunctionVector({1.0, -1.0})), InputError);
}

TEST_CASE("span of the domain") {
  auto rng = make_stream(2, 2);
  auto g = testing::share(random_connected_graph(5, 2, rng));
  auto rep = span_domain_check(box_problem(g), 20, 4);
  CHECK(rep.report.pass());
  for (double t : rep.scalings) CHECK(t > 0.0);
  SymClosureProblem sym{ModularProblem(Functional::p_energy(g, 2.0))};
  CHECK(span_domain_check(sym, 5, 4).report.pass());
}

TEST_CASE("closure of a non-symmetric energy: symmetry, minorant, convexity") {
  auto g = testing::share(path_graph(4, 1.0 / 3));
  SymClosureProblem prob{ModularProblem(Functional::positive_part_p_energy(g, 2.0))};
  auto rng = make_stream(2, 3);
  for (int s = 0; s < 6; ++s) {
    auto f = random_vector(4, rng), h = random_vector(4, rng);
    const double sf = sym_eval(prob, f).value.value(), sm = sym_eval(prob, -f).value.value();
    CHECK(sf == doctest::Approx(sm).epsilon(1e-6));
    const double bound = std::min(prob.base().E1(f.values()).value(), prob.base().E1((-f).values()).value());
    CHECK(sf <= bound * (1 + 1e-9));
    const double sh = sym_eval(prob, h).value.value();
    const double mid = sym_eval(prob, 0.5 * (f + h)).value.value();
    CHECK(mid <= 0.5 * (sf + sh) + 1e-6 * std::max(1.0, sf + sh));
    auto d = sym_decompose(prob, f);
    CHECK(d.certified());
  }
}
