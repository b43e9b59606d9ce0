#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "nldf/dirichlet.hpp"

using namespace nldf;

TEST_CASE("lattice inequality examples") {
  auto g = testing::unit_path(2);
  auto e = Functional::p_energy(g, 2.0);
  FunctionVector u({1.0, 0.0}), v({0.0, 1.0});
  CHECK(check_lattice_inequality(e, u, u).value == 0.0);
  CHECK(check_lattice_inequality(e, FunctionVector({0.0, 0.5}), FunctionVector({1.0, 0.7})).value == 0.0);
  CHECK(check_lattice_inequality(e, u, v).value == doctest::Approx(1.0));
}

TEST_CASE("truncation inequality examples") {
  auto rng = make_stream(1, 0);
  auto g = testing::share(random_connected_graph(6, 4, rng));
  auto e = Functional::p_energy(g, 3.0);
  auto u = random_vector(6, rng), v = random_vector(6, rng);
  CHECK(check_truncation_inequality(e, u, u, 0.5).value == 0.0);
  CHECK(check_truncation_inequality(e, u, v, (u - v).sup_norm() + 0.1).value ==
        doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
  CHECK_THROWS_AS(check_truncation_inequality(e, u, v, 0.0), InputError);
  for (int s = 0; s < 200; ++s) {
    auto a = random_vector(6, rng), b = random_vector(6, rng);
    CHECK(check_truncation_inequality(e, a, b, uniform(rng, 0.01, 2)).pass(1e-9));
  }
}

TEST_CASE("Beurling-Deny examples") {
  auto rng = make_stream(1, 1);
  auto g = testing::share(random_connected_graph(6, 4, rng));
  auto e = Functional::p_energy(g, 2.0);
  auto u = random_vector(6, rng), v = random_vector(6, rng);
  CHECK(check_beurling_deny(e, u, v, NormalContraction::identity()).normalized() ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(check_beurling_deny(e, u, v, NormalContraction::zero()).value == 0.0);
  // v = 0 with the clamp: E(u - clamp(u)) + E(clamp(u)) <= E(u)
  auto z = FunctionVector::zeros(6);
  auto m = check_beurling_deny(e, u, z, NormalContraction::clamp(0.3));
  const double lhs = e(u - truncate(u, 0.3)).value() + e(truncate(u, 0.3)).value();
  CHECK(m.value == doctest::Approx(e(u).value() - lhs));
  CHECK(e(truncate(u, 0.3)).value() <= e(u).value() + 1e-12);
}

TEST_CASE("normal contractions") {
  auto lin = NormalContraction::linear(0.3);
  CHECK(lin(2.0) == doctest::Approx(0.6));
  CHECK(NormalContraction({-1.0, 1.0}, {1, 1, 1})(5.0) == doctest::Approx(5.0));
  CHECK(NormalContraction::positive_part()(-2.0) == 0.0);
  CHECK(NormalContraction::clamp(1.0)(3.0) == 1.0);
  CHECK(NormalContraction::truncation_midpoint(1.0)(2.0) == doctest::Approx(1.5));
  CHECK(NormalContraction::truncation_midpoint(1.0)(-3.0) == doctest::Approx(-2.0));
  CHECK_THROWS_AS(NormalContraction({0.0}, {0.5, 1.5}), InputError);
  auto rng = make_stream(1, 2);
  for (int s = 0; s < 100; ++s) {
    auto p = sample_normal_contraction(rng, 4.0);
    CHECK(p(0.0) == 0.0);
    CHECK(p.breakpoints().size() >= 1);
    CHECK(p.breakpoints().size() <= 8);
    for (int t = 0; t < 20; ++t) {
      const double x = uniform(rng, -6, 6), y = uniform(rng, -6, 6);
      CHECK(std::abs(p(x) - p(y)) <= std::abs(x - y) * (1 + 1e-12) + 1e-15);
    }
  }
}

TEST_CASE("Dirichlet sweeps on the symmetric catalog") {
  auto rng = make_stream(1, 3);
  auto g = testing::share(random_connected_graph(8, 6, rng));
  for (const auto& e : symmetric_catalog(g)) {
    CAPTURE(e.describe());
    auto r = verify_dirichlet(e, 300, 300, 12);
    CHECK(r.lattice.pass());
    CHECK(r.truncation.pass());
    CHECK(r.contraction.pass());
    CHECK(r.converse.pass());
  }
}

TEST_CASE("Riesz closure") {
  auto g = testing::unit_path(3);
  for (auto e : {Functional::p_energy(g, 2.0), Functional::linf_ball_indicator(g, 1.0),
                 Functional::lipschitz_indicator(g, 1.0)}) {
    ModularProblem prob(e);
    auto rng = make_stream(1, 4);
    for (int s = 0; s < 50; ++s) {
      auto u = random_vector(3, rng, 5), v = random_vector(3, rng, 5);
      CHECK(check_riesz_closure(prob, u, v).pass());
    }
  }
}

TEST_CASE("lattice norm bound") {
  auto g = testing::unit_path(3);
  ModularProblem prob(Functional::p_energy(g, 2.0));
  FunctionVector u({0.2, -0.4, 1.0});
  auto big = FunctionVector::constant(3, 100.0);
  auto m = check_lattice_norm_bound(prob, u, big);
  CHECK(m.value == doctest::Approx(energy_norm(prob, big).v()).epsilon(1e-9));
  CHECK(check_lattice_norm_bound(prob, u, u).value == doctest::Approx(energy_norm(prob, u).v()).epsilon(1e-9));
  CHECK_THROWS_AS(check_lattice_norm_bound(ModularProblem(Functional::positive_part_p_energy(g, 2.0)), u, u),
                  InputError);
  auto rng = make_stream(1, 5);
  auto h = testing::share(random_connected_graph(7, 3, rng));
  for (const auto& e : symmetric_catalog(h)) CHECK(sweep_lattice_norm_bound(ModularProblem(e), 40, 3).pass());
}

TEST_CASE("linf counterexample") {
  for (std::size_t n : {2, 100}) {
    auto c = run_linf_counterexample(n);
    CHECK(c.pass);
    CHECK(c.lhs == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(c.rhs == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(c.norm_f == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(c.l2_f == doctest::Approx(1.0));
    CHECK(c.sup_f == 1.0);
  }
  CHECK_THROWS_AS(run_linf_counterexample(3), InputError);
}

TEST_CASE("Lipschitz counterexample on small meshes") {
  auto c = run_lipschitz_counterexample(33, 40);
  CHECK(c.pass);
  CHECK(c.rows.front().norm_f_min_g >= 1 - 1e-6);
  CHECK(c.rows.back().norm_f_min_g >= 1 - 1e-6);
  for (const auto& r : c.rows) CHECK(r.norm_g <= 2.0 / static_cast<double>(r.k) + 1e-9);
}

TEST_CASE("lattice continuity") {
  auto rng = make_stream(1, 6);
  auto g = testing::share(random_connected_graph(8, 5, rng));
  ModularProblem prob(Functional::p_energy(g, 2.0));
  auto u = random_vector(8, rng), v = random_vector(8, rng);
  auto wu = random_vector(8, rng, 1e-3), wv = random_vector(8, rng, 1e-3);
  auto r = check_lattice_continuity(prob, u, v, wu, wv, 256);
  CAPTURE(r.final_min);
  CAPTURE(r.final_max);
  CAPTURE(r.monotone_violations);
  CHECK(r.pass);
  auto still = check_lattice_continuity(prob, u, v, FunctionVector::zeros(8), FunctionVector::zeros(8), 16);
  for (double t : still.min_tail) CHECK(t == 0.0);
  CHECK_THROWS_AS(check_lattice_continuity(ModularProblem(Functional::lipschitz_indicator(g, 1.0)), u, v, wu, wv, 8),
                  InputError);
}

TEST_CASE("cutoff") {
  auto g = testing::unit_path(2);
  ModularProblem prob(Functional::p_energy(g, 2.0));
  FunctionVector u({0.0, 2.0});
  auto r = check_cutoff(prob, u, {0.0, 0.5, 1.0, 2.0, 3.0});
  CHECK(r.pass());
  CHECK(r.rows[0].e1_truncated == 0.0);
  CHECK(r.rows[3].distance == 0.0);
  CHECK(r.rows[4].distance == 0.0);
  CHECK(prob.E(truncate(u, 1.0).values()).value() <= prob.E(u.values()).value());
}

TEST_CASE("shifted minimum") {
  auto g = testing::unit_path(4);
  auto rng = make_stream(1, 7);
  for (auto e : {Functional::p_energy(g, 2.0), Functional::linf_ball_indicator(g, 1.0)}) {
    ModularProblem prob(e);
    for (int s = 0; s < 50; ++s) {
      auto u = random_vector(4, rng), gg = s == 0 ? FunctionVector::zeros(4) : random_vector(4, rng);
      auto r = check_corollary_shifted_min(prob, u, gg, uniform(rng, 0.1, 2));
      CHECK(r.pass());
    }
  }
}
