#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "nldf/sampling.hpp"

using namespace nldf;

TEST_CASE("l2 norm examples") {
  auto g = testing::measured({1, 1, 1, 1});
  CHECK(l2_norm(*g, FunctionVector::zeros(4)) == 0.0);
  CHECK(l2_norm(*g, FunctionVector::constant(4, 1.0)) == doctest::Approx(2.0));
  auto h = testing::measured({0.5, 0.5});
  const double direct = std::sqrt(0.5 * 9 + 0.5 * 16);
  CHECK(l2_norm(*h, FunctionVector({3.0, -4.0})) == doctest::Approx(direct).epsilon(1e-15));
  CHECK(l2_norm(*h, FunctionVector({3.0, -4.0})) == doctest::Approx(std::sqrt(12.5)));
}

TEST_CASE("l2 norm rejects dimension mismatch") {
  auto g = testing::measured({1, 1});
  CHECK_THROWS_AS(l2_norm(*g, FunctionVector({1.0, 2.0, 3.0})), InputError);
}

TEST_CASE("l2 norm is a norm on random pairs") {
  auto rng = make_stream(3, 0);
  auto g = random_connected_graph(12, 6, rng);
  for (int s = 0; s < 1000; ++s) {
    auto u = random_vector(12, rng, 3.0), v = random_vector(12, rng, 3.0);
    const double mu = uniform(rng, -4, 4);
    const double nu = l2_norm(g, u), nv = l2_norm(g, v);
    CHECK(std::abs(l2_norm(g, mu * u) - std::abs(mu) * nu) <= 1e-12 * std::abs(mu) * nu + 1e-300);
    CHECK(l2_norm(g, u + v) <= (nu + nv) * (1 + 1e-12));
  }
}

TEST_CASE("lattice operations") {
  FunctionVector u({1.0, -1.0}), z = FunctionVector::zeros(2);
  CHECK(lattice_min(u, z) == FunctionVector({0.0, -1.0}));
  CHECK(lattice_max(u, z) == FunctionVector({1.0, 0.0}));
  CHECK(lattice_min(u, u) == u);
  CHECK_THROWS_AS(lattice_min(u, FunctionVector({1.0})), InputError);
  auto rng = make_stream(5, 1);
  for (int s = 0; s < 200; ++s) {
    auto a = random_vector(9, rng, 2.0), b = random_vector(9, rng, 2.0);
    auto lhs = lattice_min(a, b) + lattice_max(a, b), rhs = a + b;
    for (std::size_t i = 0; i < 9; ++i) CHECK(lhs[i] == rhs[i]);
  }
}

TEST_CASE("truncate") {
  FunctionVector u({5.0, -5.0, 0.5});
  CHECK(truncate(u, 1.0) == FunctionVector({1.0, -1.0, 0.5}));
  CHECK(truncate(u, 5.0) == u);
  CHECK(truncate(u, 0.0).is_zero());
  CHECK_THROWS_AS(truncate(u, -1.0), InputError);
  auto rng = make_stream(5, 2);
  for (int s = 0; s < 100; ++s) {
    auto a = random_vector(7, rng, 3.0);
    const double c = uniform(rng, 0, 3);
    auto lhs = truncate(a, c);
    auto rhs = lattice_min(lattice_max(FunctionVector::constant(7, -c), a), FunctionVector::constant(7, c));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("stieltjes midpoint") {
  auto z = FunctionVector::zeros(3);
  CHECK(stieltjes_midpoint(z, z, 1.0).is_zero());
  auto two = FunctionVector::constant(3, 2.0);
  auto m = stieltjes_midpoint(two, z, 1.0);
  for (std::size_t i = 0; i < 3; ++i) CHECK(m[i] == 1.5);
  auto m3 = stieltjes_midpoint(FunctionVector::constant(3, -3.0), z, 1.0);
  for (std::size_t i = 0; i < 3; ++i) CHECK(m3[i] == -2.0);
  CHECK_THROWS_AS(stieltjes_midpoint(z, z, 0.0), InputError);
  // scalar brute force of the displayed formula
  auto rng = make_stream(9, 0);
  for (int s = 0; s < 200; ++s) {
    auto u = random_vector(4, rng, 3), v = random_vector(4, rng, 3);
    const double a = uniform(rng, 0.01, 2.0);
    auto q = stieltjes_midpoint(u, v, a);
    for (std::size_t i = 0; i < 4; ++i) {
      const double d = u[i] - v[i];
      const double expect = 0.5 * (std::max(d + a, 0.0) - std::max(-(d - a), 0.0));
      CHECK(q[i] == doctest::Approx(expect).epsilon(1e-15));
    }
  }
}

TEST_CASE("graph validation and hull") {
  CHECK_THROWS_AS(MeasuredGraph({1.0, 0.0}, {}), InputError);
  CHECK_THROWS_AS(MeasuredGraph({1.0, 1.0}, {{0, 0, 1.0}}), InputError);
  CHECK_THROWS_AS(MeasuredGraph({1.0, 1.0}, {{0, 1, -1.0}}), InputError);
  CHECK_THROWS_AS(MeasuredGraph({1.0, 1.0}, {{0, 1, 1.0}, {1, 0, 2.0}}), InputError);
  MeasuredGraph g({1, 2, 3, 4}, {{1, 0, 1.0}, {2, 1, 1.0}, {3, 2, 1.0}});
  CHECK(g.edges()[0].a == 0);
  CHECK(g.edges()[0].b == 1);
  std::vector<std::size_t> a{0};
  CHECK(g.hull(a, 0) == std::vector<std::size_t>{0});
  CHECK(g.hull(a, 2) == std::vector<std::size_t>{0, 1, 2});
  CHECK(g.mass_of(g.hull(a, 1)) == 3.0);
  CHECK(g.total_mass() == 10.0);
}

TEST_CASE("generators") {
  auto p = path_graph(2, 1.0);
  CHECK(p.node_count() == 2);
  CHECK(p.edge_count() == 1);
  CHECK(p.measure(0) == 1.0);
  CHECK(p.edges()[0].weight == 1.0);
  auto g = grid_graph(3, 3, 0.5);
  CHECK(g.node_count() == 9);
  CHECK(g.edge_count() == 12);
  CHECK(g.measure(4) == 0.25);
  auto q = path_graph(5, 0.25, 3.0);
  CHECK(q.edges()[0].weight == doctest::Approx(std::pow(0.25, -2.0)));
  CHECK_THROWS_AS(path_graph(1, 1.0), InputError);
}
