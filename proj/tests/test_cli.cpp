#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "helpers.hpp"
#include "nldf/cli.hpp"
#include "nldf/io.hpp"
#include "nldf/sampling.hpp"
#include "oracle.hpp"

using namespace nldf;

namespace {
Json base(const std::string& command) {
  return {{"schema_version", 1},
          {"command", command},
          {"graph", {{"generator", "path"}, {"n", 9}}},
          {"functional", {{"kind", "p_energy"}, {"p", 2}}}};
}
}  // namespace

TEST_CASE("canonical dump sorts keys and prints shortest doubles") {
  Json j{{"b", 0.1}, {"a", {3, 1.5}}, {"c", {{"z", 1}, {"y", 1e-300}}}};
  const auto text = canonical_dump(j);
  CHECK(text == "{\n  \"a\": [3, 1.5],\n  \"b\": 0.1,\n  \"c\": {\n    \"y\": 1e-300,\n    \"z\": 1\n  }\n}\n");
  CHECK(Json::parse(text)["b"].get<double>() == 0.1);
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("generate-graph examples") {
  auto p2 = Json::parse(generate_graph("path", 2, 0, 1.0, 2.0, 0, ""));
  CHECK(p2["nodes"].size() == 2);
  CHECK(p2["nodes"][0]["measure"] == 1);
  CHECK(p2["edges"].size() == 1);
  CHECK(p2["edges"][0]["w"] == 1);
  CHECK(p2["schema_version"] == 1);
  auto g3 = Json::parse(generate_graph("grid", 3, 3, 0.5, 2.0, 0, ""));
  CHECK(g3["nodes"].size() == 9);
  CHECK(g3["edges"].size() == 12);
  CHECK_THROWS_AS(generate_graph("path", 1, 0, 1.0, 2.0, 0, ""), InputError);

  const std::string path = "nldf_test_graph.json";
  const auto text = generate_graph("grid", 4, 3, 0.1, 1.5, 1, "");
  {
    std::ofstream f(path);
    f << text;
  }
  CHECK(generate_graph("file", 0, 0, 0, 2, 0, path) == text);
  std::remove(path.c_str());
}

TEST_CASE("graph and functional round trip") {
  auto rng = make_stream(1, 0);
  auto g = random_connected_graph(7, 4, rng);
  auto back = graph_from_json(Json::parse(canonical_dump(graph_to_json(g))));
  CHECK(canonical_dump(graph_to_json(back)) == canonical_dump(graph_to_json(g)));
  auto gp = testing::share(g);
  auto e = Functional::sum({Functional::scaled(Functional::p_energy(gp, 1.5), 2.0),
                            Functional::lalpha_perturbation(Functional::p_energy(gp, 2.0), 3.0),
                            Functional::box_indicator(gp, -1, 2), Functional::lipschitz_indicator(gp, 0.5)});
  auto j = functional_to_json(e);
  auto e2 = functional_from_json(j, gp);
  CHECK(functional_to_json(e2) == j);
  for (int s = 0; s < 20; ++s) {
    auto u = random_vector(7, rng, 0.2);
    CHECK(e(u).value() == e2(u).value());
  }
}

TEST_CASE("schema violations are input errors") {
  CHECK_THROWS_AS(run_config(Json{{"schema_version", 1}, {"command", "nope"}}), InputError);
  CHECK_THROWS_AS(run_config(Json{{"schema_version", 2}, {"command", "norm"}}), InputError);
  auto c = base("norm");
  c["params"] = {{"function", "f"}};
  c["functions"] = {{"f", {{"constant", 1.0}}}};
  c["extra"] = 1;
  CHECK_THROWS_WITH_AS(run_config(c), "extra: unknown key", InputError);
  c.erase("extra");
  c["functional"]["q"] = 3;
  CHECK_THROWS_WITH_AS(run_config(c), "functional.q: unknown key", InputError);
  c["functional"].erase("q");
  c["params"]["function"] = "g";
  CHECK_THROWS_AS(run_config(c), InputError);
  c["params"]["function"] = "f";
  c["functions"]["f"] = {{"values", {1, 2}}};
  CHECK_THROWS_AS(run_config(c), InputError);
  auto bad_graph = Json::parse(R"({"schema_version":1,"nodes":[{"id":0,"measure":1}],"edges":[],"extra":0})");
  CHECK_THROWS_AS(graph_from_json(bad_graph), InputError);
}

TEST_CASE("capacity command matches the oracle on the 16x16 grid") {
  Json c{{"schema_version", 1},
         {"command", "capacity"},
         {"graph", {{"generator", "grid"}, {"n", 16}, {"mesh", 1.0 / 15}}},
         {"functional", {{"kind", "p_energy"}, {"p", 2}}},
         {"params", {{"set", {{"box", {{"rows", Json::array({7, 8})}, {"cols", Json::array({7, 8})}}}}}}}};
  auto out = run_config(c);
  CHECK(out.status == 0);
  const double value = out.document["values"]["capacity"]["value"].get<double>();
  auto g = grid_graph(16, 16, 1.0 / 15);
  const double oracle = testing::capacity_p2_oracle(g, {7 * 16 + 7, 7 * 16 + 8, 8 * 16 + 7, 8 * 16 + 8});
  CHECK(value == doctest::Approx(oracle).epsilon(1e-6));

  c["params"]["set"] = {{"nodes", Json::array()}};
  CHECK(run_config(c).document["values"]["capacity"]["value"] == 0.0);
}

TEST_CASE("counterexamples command") {
  Json c{{"schema_version", 1}, {"command", "counterexamples"}, {"params", {{"which", "linf"}}}};
  auto out = run_config(c);
  CHECK(out.status == 0);
  CHECK(out.document["values"]["linf"]["lhs"].get<double>() == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(out.document["values"]["linf"]["rhs"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(out.document["pass"] == true);
}

TEST_CASE("every command is deterministic and replayable") {
  std::vector<Json> configs;
  auto n = base("norm");
  n["functions"] = {{"f", {{"random", {{"scale", 2.0}}}}}};
  n["params"] = {{"function", "f"}};
  configs.push_back(n);
  auto s = n;
  s["command"] = "seminorm";
  configs.push_back(s);
  auto vn = base("verify-norms");
  vn["params"] = {{"samples", 20}};
  configs.push_back(vn);
  auto vd = base("verify-dirichlet");
  vd["params"] = {{"samples", 50}, {"lattice_norm_samples", 10}};
  configs.push_back(vd);
  auto sc = n;
  sc["command"] = "sym-closure";
  sc["functional"] = {{"kind", "positive_part_p_energy"}, {"p", 2}};
  sc["graph"]["n"] = 4;
  configs.push_back(sc);
  auto cap = base("capacity");
  cap["functions"] = {{"f", {{"random", Json::object()}}}};
  cap["params"] = {{"set", {{"superlevel", {{"function", "f"}, {"level", 0.5}}}}}, {"lemma_families", 2}};
  configs.push_back(cap);
  configs.push_back(Json{{"schema_version", 1},
                         {"command", "counterexamples"},
                         {"params", {{"n", 33}, {"k_max", 20}}}});
  auto ch = base("chebyshev-sweep");
  ch["params"] = {{"samples", 10}};
  configs.push_back(ch);
  for (const auto& c : configs) {
    CAPTURE(c.dump());
    auto a = run_config(c, 77), b = run_config(c, 77);
    CHECK(canonical_dump(a.document) == canonical_dump(b.document));
    CHECK(a.status == 0);
    CHECK(a.document["seed"] == 77);
  }
  // different seeds change random inputs
  CHECK(run_config(configs[0], 1).document["digest"] == run_config(configs[0], 1).document["digest"]);
  CHECK(run_config(configs[0], 1).document["values"] != run_config(configs[0], 2).document["values"]);
}

TEST_CASE("replay reruns a single check") {
  auto vn = base("verify-norms");
  vn["params"] = {{"samples", 10}};
  auto out = run_config(vn, 3, "triangle");
  REQUIRE(out.document["checks"].size() == 1);
  CHECK(out.document["checks"][0]["check"] == "triangle");
  CHECK_THROWS_AS(run_config(vn, 3, "no_such_check"), InputError);
}

TEST_CASE("csv rows") {
  Json rows = Json::array({{{"k", 1}, {"x", 0.5}}, {{"k", 2}, {"x", 0.25}}});
  CHECK(rows_to_csv(rows) == "k,x\n1,0.5\n2,0.25\n");
}
