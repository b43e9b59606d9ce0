#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "nldf/modular.hpp"
#include "nldf/sampling.hpp"
#include "nldf/sym_closure.hpp"

using namespace nldf;

TEST_CASE("E1 examples") {
  auto g = testing::unit_path(2);
  ModularProblem pe(Functional::p_energy(g, 2.0));
  CHECK(eval_E1(pe, FunctionVector::zeros(2)).value() == 0.0);
  CHECK(eval_E1(pe, FunctionVector({0.0, 1.0})).value() == doctest::Approx(1.5));
  ModularProblem linf(Functional::linf_ball_indicator(g, 1.0));
  CHECK(eval_E1(linf, FunctionVector({2.0, 0.0})).infinite());
}

TEST_CASE("energy norm closed forms") {
  auto g = testing::unit_path(2);
  ModularProblem pe(Functional::p_energy(g, 2.0));
  CHECK(energy_norm(pe, FunctionVector::zeros(2)).v() == 0.0);
  // E_1 = 4 at u = (0, 2) scaled: E_1(0, a) = a^2 + a^2/2
  const double a = std::sqrt(4.0 / 1.5);
  FunctionVector u({0.0, a});
  CHECK(eval_E1(pe, u).value() == doctest::Approx(4.0));
  CHECK(energy_norm(pe, u).v() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(energy_seminorm(pe, FunctionVector::constant(2, 7.0)).v() == 0.0);
  // E(u) = 9 -> seminorm 3: weight 1, difference sqrt(18)
  FunctionVector w({0.0, std::sqrt(18.0)});
  CHECK(pe.E(w.values()).value() == doctest::Approx(9.0));
  CHECK(energy_seminorm(pe, w).v() == doctest::Approx(3.0).epsilon(1e-9));
  for (double alpha : {0.5, 1.0, 2.0, 7.0})
    CHECK(energy_norm_alpha(pe, u, alpha).v() == doctest::Approx(std::sqrt(4.0 / alpha)).epsilon(1e-9));
  CHECK(energy_norm_alpha(pe, u, 1.0).v() == energy_norm(pe, u).v());
  CHECK_THROWS_AS(energy_norm_alpha(pe, u, 0.0), InputError);
}

TEST_CASE("linf ball indicator gives the sup norm on a probability space") {
  for (std::size_t n : {2, 5, 16}) {
    auto g = testing::share(path_graph(n, 1.0 / static_cast<double>(n)));
    ModularProblem prob(Functional::linf_ball_indicator(g, 1.0));
    auto rng = make_stream(4, n);
    for (int s = 0; s < 50; ++s) {
      auto u = random_vector(n, rng, 3.0);
      CHECK(energy_norm(prob, u).v() == doctest::Approx(u.sup_norm()).epsilon(1e-9));
    }
  }
}

TEST_CASE("energy space membership") {
  auto g = testing::unit_path(2);
  CHECK(in_energy_space(ModularProblem(Functional::p_energy(g, 3.0)), FunctionVector({100.0, -3.0})));
  ModularProblem linf(Functional::linf_ball_indicator(g, 1.0));
  CHECK(in_energy_space(linf, FunctionVector({1.0, 5.0})));
  CHECK(in_energy_space(linf, FunctionVector::zeros(2)));
  // max(||u||_2, ||u||_inf) with unit measures
  CHECK(energy_norm(linf, FunctionVector({1.0, 5.0})).v() == doctest::Approx(std::sqrt(26.0)).epsilon(1e-9));
}

TEST_CASE("unit ball property") {
  auto g = testing::unit_path(2);
  ModularProblem pe(Functional::p_energy(g, 2.0));
  FunctionVector u({0.0, std::sqrt(1.0 / 1.5)});
  auto r = check_unit_ball_property(pe, u);
  CHECK(r.pass());
  CHECK(r.norm == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(check_unit_ball_property(pe, FunctionVector::zeros(2)).pass());
  auto rng = make_stream(4, 99);
  for (int s = 0; s < 200; ++s) {
    auto v = random_vector(2, rng, std::exp(uniform(rng, -3, 3)));
    auto rep = check_unit_ball_property(pe, v);
    CHECK(rep.pass());
    // closed form: E_1 <= norm  <=>  E_1 <= 1
    CHECK(rep.norm == doctest::Approx(std::sqrt(rep.e1)).epsilon(1e-9));
  }
}

TEST_CASE("norm-equivalence chain") {
  auto g = testing::share(grid_graph(4, 4, 1.0 / 3));
  ModularProblem pe(Functional::p_energy(g, 2.0));
  auto c = equivalence_chain(pe, FunctionVector::zeros(16));
  CHECK(c.norm == 0.0);
  CHECK(c.h == 0.0);
  auto rng = make_stream(21, 0);
  for (int s = 0; s < 50; ++s) {
    auto x = random_vector(16, rng);
    auto v = equivalence_chain(pe, x);
    CHECK(v.norm_two == doctest::Approx(v.norm / std::sqrt(2.0)).epsilon(1e-9));
    CHECK(v.norm_two <= v.h + v.semi + 1e-9);
    CHECK(v.h + v.semi <= 2 * v.norm * (1 + 1e-9));
  }
  for (const auto& e : symmetric_catalog(g)) {
    auto rep = check_norm_equivalence(ModularProblem(e), 100, 5);
    CAPTURE(e.describe());
    CHECK(rep.chain.pass());
    CHECK(rep.worst_sum_over_norm <= 2.0 + 1e-7);
  }
}

TEST_CASE("modular convergence co-occurs with norm convergence") {
  auto g = testing::share(path_graph(9, 0.125));
  ModularProblem pe(Functional::p_energy(g, 2.0));
  auto rng = make_stream(1, 1);
  auto u = random_vector(9, rng);
  std::vector<FunctionVector> shrinking, constant;
  for (int n = 1; n <= 1 << 16; n *= 2) {
    shrinking.push_back((1.0 / n) * u);
    constant.push_back(u);
  }
  auto a = check_modular_convergence(pe, shrinking, {0.5, 1, 10, 100}, 1e-2);
  CHECK(a.modular_to_zero);
  CHECK(a.norm_to_zero);
  auto b = check_modular_convergence(pe, constant, {0.5, 1, 10});
  CHECK_FALSE(b.modular_to_zero);
  CHECK_FALSE(b.norm_to_zero);
  CHECK(b.consistent());
  // constants g_n = 1/n under the slope indicator
  ModularProblem lip(Functional::lipschitz_indicator(g, 1.0));
  std::vector<FunctionVector> gs;
  for (int n = 1; n <= 1 << 14; n *= 2) gs.push_back(FunctionVector::constant(9, 1.0 / n));
  auto c = check_modular_convergence(lip, gs, {1, 10, 100}, 1e-2);
  CHECK(c.modular_to_zero);
  CHECK(c.norm_to_zero);
}

TEST_CASE("bisection certificate and alpha monotonicity") {
  auto rng = make_stream(8, 0);
  auto g = testing::share(random_connected_graph(10, 5, rng));
  for (const auto& e : symmetric_catalog(g)) {
    ModularProblem prob(e);
    CAPTURE(e.describe());
    for (int s = 0; s < 30; ++s) {
      auto u = random_domain_vector(e, rng, 2.0);
      auto nv = energy_norm(prob, u);
      if (!nv.finite() || nv.v() == 0.0) continue;
      const double l = nv.v(), tol = prob.settings().tol;
      const auto up = prob.E1((1.0 / (l * (1 + 2 * tol)) * u).values());
      const auto dn = prob.E1((1.0 / (l * (1 - 2 * tol)) * u).values());
      CHECK(up.value() <= 1.0);
      if (dn.finite()) CHECK(dn.value() >= 1.0 - 1e-9);
      CHECK(energy_norm_alpha(prob, u, 2.0).v() <= energy_norm_alpha(prob, u, 1.5).v() * (1 + 1e-9));
    }
  }
}

TEST_CASE("norm is continuous along small perturbations") {
  auto rng = make_stream(8, 1);
  auto g = testing::share(random_connected_graph(8, 4, rng));
  for (const auto& e : symmetric_catalog(g)) {
    ModularProblem prob(e);
    auto u = random_domain_vector(e, rng, 1.0);
    auto w = random_vector(8, rng, 0.1);
    CAPTURE(e.describe());
    const double limit = energy_norm(prob, u).v();
    const double nw = energy_norm(prob, w).v();
    for (int n = 64; n <= 4096; n *= 2) {
      // triangle inequality both ways
      const double un = energy_norm(prob, u + (1.0 / n) * w).v();
      const double slack = 3e-8 * std::max(1.0, limit);
      CHECK(limit <= un + nw / n + slack);
      CHECK(un <= limit + nw / n + slack);
    }
  }
}

TEST_CASE("norm axioms per symmetric kind") {
  auto rng = make_stream(8, 2);
  auto g = testing::share(random_connected_graph(8, 4, rng));
  for (const auto& e : symmetric_catalog(g)) {
    auto rep = check_norm_axioms(ModularProblem(e), 100, 17);
    CAPTURE(e.describe());
    CHECK(rep.pass());
  }
}

TEST_CASE("norm axioms on the symmetric-closure norm of a non-symmetric kind") {
  auto g = testing::share(path_graph(5, 0.25));
  const SymClosureProblem sym(ModularProblem(Functional::positive_part_p_energy(g, 2.0)));
  auto rep = check_norm_axioms(
      *g, [&](const FunctionVector& u) { return sym_energy_norm(sym, u); }, true, 8, 3, 1e-5);
  CHECK(rep.homogeneity.pass());
  CHECK(rep.triangle.pass());
  CHECK(rep.definiteness.pass());
}
