// Acceptance run: one line per criterion, exit status 1 if any fails.
// Usage: nldf_acceptance <path to nldf binary> [criterion ...]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "nldf/capacity.hpp"
#include "nldf/dirichlet.hpp"
#include "nldf/io.hpp"
#include "nldf/sampling.hpp"
#include "nldf/sym_closure.hpp"
#include "oracle.hpp"

using namespace nldf;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void fail(const std::string& why) {
    if (pass) detail.str("");
    pass = false;
    detail << why << "; ";
  }
};

std::string cli_path;

GraphPtr p16() { return testing::share(path_graph(16, 1.0 / 15)); }
GraphPtr grid8() { return testing::share(grid_graph(8, 8, 1.0 / 7)); }
GraphPtr small_random(std::uint64_t seed, std::size_t n, std::size_t extra) {
  auto rng = make_stream(seed, 0);
  return testing::share(random_connected_graph(n, extra, rng));
}

void criterion_1(Outcome& o) {
  std::size_t kinds = 0;
  for (const auto& g : {p16(), grid8()}) {
    for (const auto& e : symmetric_catalog(g)) {
      auto r = check_norm_axioms(ModularProblem(e), 1000, 101, 1e-8);
      ++kinds;
      if (!r.pass()) o.fail(e.describe() + " on " + std::to_string(g->node_count()) + " nodes");
    }
  }
  o.detail << kinds << " (kind, graph) pairs x 1000 samples";
}

void criterion_2(Outcome& o) {
  double worst = 0.0;
  for (const auto& g : {p16(), grid8()}) {
    for (const auto& e : symmetric_catalog(g)) {
      auto r = check_norm_equivalence(ModularProblem(e), 1000, 202);
      if (!r.chain.pass() || r.worst_sum_over_norm > 2.0 * (1.0 + 3e-8)) o.fail(e.describe());
      worst = std::max(worst, r.worst_sum_over_norm);
    }
  }
  o.detail << "max (|x|_H + |x|_D) / ||x||_D = " << worst;
}

void criterion_3(Outcome& o) {
  auto g = grid8();
  std::size_t samples = 0;
  for (const auto& e : symmetric_catalog(g)) {
    ModularProblem prob(e);
    for (std::size_t s = 0; s < 1000; ++s) {
      auto rng = make_stream(303, s);
      auto u = random_domain_vector(e, rng, std::exp(uniform(rng, std::log(0.05), std::log(5.0))));
      ++samples;
      if (!check_unit_ball_property(prob, u).pass()) {
        o.fail(e.describe() + " sample " + std::to_string(s));
        break;
      }
    }
  }
  // 2-homogeneous case: ||u|| = sqrt(E_1(u))
  double worst = 0.0;
  for (const auto& e : {Functional::p_energy(g, 2.0), Functional::scaled(Functional::p_energy(g, 2.0), 2.5)}) {
    ModularProblem prob(e);
    for (std::size_t s = 0; s < 1000; ++s) {
      auto rng = make_stream(304, s);
      auto u = random_vector(g->node_count(), rng, std::exp(uniform(rng, -3.0, 3.0)));
      const double closed = std::sqrt(prob.E1(u.values()).value());
      worst = std::max(worst, std::abs(energy_norm(prob, u).v() - closed) / closed);
    }
  }
  if (worst > 1e-8) o.fail("closed form off by " + std::to_string(worst));
  o.detail << samples << " ball samples, closed-form rel. error " << worst;
}

void criterion_4(Outcome& o) {
  std::size_t kinds = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& g : {grid8(), small_random(4, 12, 8)}) {
    for (const auto& e : symmetric_catalog(g)) {
      auto r = verify_dirichlet(e, 10000, 10000, 404);
      ++kinds;
      for (const auto* v : {&r.lattice, &r.truncation, &r.contraction, &r.converse})
        worst = std::min(worst, v->worst_margin);
      if (!r.pass()) o.fail(e.describe());
    }
  }
  o.detail << kinds << " kinds x 10^4 samples, worst normalized margin " << worst;
}

void criterion_5(Outcome& o) {
  std::size_t kinds = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& g : {p16(), small_random(5, 10, 6)}) {
    for (const auto& e : symmetric_catalog(g)) {
      auto r = sweep_lattice_norm_bound(ModularProblem(e), 1000, 505);
      ++kinds;
      worst = std::min(worst, r.worst_margin);
      if (!r.pass()) o.fail(e.describe());
    }
  }
  o.detail << kinds << " kinds x 1000 pairs, worst normalized margin " << worst;
}

void criterion_6(Outcome& o) {
  for (std::size_t n : {2, 16, 256}) {
    auto c = run_linf_counterexample(n);
    if (!c.pass || std::abs(c.lhs - 2.0) > 1e-6 || std::abs(c.rhs - 1.0) > 1e-6)
      o.fail("n = " + std::to_string(n));
    if (n == 16) o.detail << "lhs " << c.lhs << ", rhs " << c.rhs;
  }
}

void criterion_7(Outcome& o) {
  auto c = run_lipschitz_counterexample(256, 1000, true);
  bool ok = c.pass && c.rows.size() == 1000;
  for (const auto& r : c.rows)
    ok = ok && r.norm_g <= 2.0 / static_cast<double>(r.k) * (1 + 1e-12) && r.norm_f_min_g >= 1.0 - 1e-6;
  if (!ok) o.fail("bound violated");
  o.detail << "k = 1..1000 on 256 nodes, max k||g_k||/2 = " << c.worst_g_ratio << ", min ||f ^ g_k|| = "
           << c.min_f_min_g;
}

void criterion_8(Outcome& o) {
  std::size_t runs = 0;
  double worst = 0.0;
  for (const auto& g : {p16(), grid8(), small_random(8, 20, 10)}) {
    for (const auto& e : quasilinear_catalog(g)) {
      ModularProblem prob(e);
      for (std::uint64_t s = 0; s < 3; ++s) {
        auto rng = make_stream(808, runs);
        const std::size_t n = g->node_count();
        auto u = random_vector(n, rng), v = random_vector(n, rng);
        // perturbations of norm 1e-2, so the tail is about 1e-2 / n
        auto wu = random_vector(n, rng), wv = random_vector(n, rng);
        wu = (1e-2 / energy_norm(prob, wu).v()) * wu;
        wv = (1e-2 / energy_norm(prob, wv).v()) * wv;
        auto r = check_lattice_continuity(prob, u, v, wu, wv, 256);
        ++runs;
        worst = std::max({worst, r.final_min, r.final_max});
        if (!r.pass) o.fail(e.describe());
      }
    }
  }
  o.detail << runs << " sequences, worst tail at n = 256: " << worst;
}

void criterion_9(Outcome& o) {
  double worst = 0.0;
  std::size_t largest = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto rng = make_stream(909, s);
    MeasuredGraph g = [&] {
      switch (s % 3) {
        case 0: {
          const std::size_t side = 7 + 4 * (s / 3);  // up to 31 x 31
          return grid_graph(side, side - (s % 2), 1.0 / static_cast<double>(side - 1));
        }
        case 1: {
          const std::size_t n = 50 + 130 * (s / 3);
          return path_graph(n, 1.0 / static_cast<double>(n - 1));
        }
        default: {
          const std::size_t n = 40 + 160 * (s / 3);  // up to 1000
          return random_connected_graph(n, n / 2, rng);
        }
      }
    }();
    auto gp = testing::share(std::move(g));
    const std::size_t n = gp->node_count();
    largest = std::max(largest, n);
    const auto a = random_subset(n, std::max<std::size_t>(1, n / 20), rng);
    CapacityProblem prob(ModularProblem(Functional::p_energy(gp, 2.0)), a, s % 2);
    const auto r = capacity(prob);
    const double oracle = testing::capacity_p2_oracle(*gp, prob.hull());
    const double err = std::abs(r.value.value() - oracle) / oracle;
    worst = std::max(worst, err);
    if (err > 1e-6) o.fail("instance " + std::to_string(s) + " (" + std::to_string(n) + " nodes)");
  }
  o.detail << "20 instances up to " << largest << " nodes, worst rel. error " << worst;
}

void criterion_10(Outcome& o) {
  std::size_t kinds = 0;
  for (const auto& e : symmetric_catalog(small_random(10, 12, 6))) {
    auto r = sweep_capacity_lemmas(ModularProblem(e), 50, 1010);
    ++kinds;
    if (!r.pass()) {
      std::string which;
      for (const auto* v : {&r.monotone, &r.subadditive, &r.countable, &r.decreasing, &r.polar})
        if (!v->pass()) which += " " + v->check;
      o.fail(e.describe() + ":" + which);
    }
  }
  o.detail << kinds << " kinds x 50 families";
}

void criterion_11(Outcome& o) {
  std::size_t kinds = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& e : symmetric_catalog(small_random(11, 12, 6))) {
    auto r = sweep_chebyshev(ModularProblem(e), 200, 1111);
    ++kinds;
    worst = std::min(worst, r.worst_margin);
    if (!r.pass()) o.fail(e.describe());
  }
  o.detail << kinds << " kinds x 200 samples, worst margin in threshold units " << worst;
}

void criterion_12(Outcome& o) {
  auto g = small_random(12, 6, 3);
  double worst = 0.0;
  for (const auto& e : symmetric_catalog(g)) {
    SymClosureProblem prob{ModularProblem(e)};
    for (std::uint64_t s = 0; s < 10; ++s) {
      auto rng = make_stream(1212, s);
      auto f = random_domain_vector(e, rng, 1.0);
      const auto e1 = prob.base().E1(f.values());
      const auto sv = sym_eval(prob, f);
      if (e1.infinite() || sv.value.infinite()) {
        if (e1.finite() != sv.value.finite()) o.fail(e.describe() + ": domains differ");
        continue;
      }
      const double err = std::abs(sv.value.value() - e1.value()) / std::max(1.0, e1.value());
      worst = std::max(worst, err);
      if (err > 1e-6) o.fail(e.describe());
    }
  }
  // box indicator on [0, 1]: dom(sym E) = {max f+ + max f- <= 1}
  SymClosureProblem box{ModularProblem(Functional::box_indicator(g, 0.0, 1.0))};
  std::size_t certified = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    auto rng = make_stream(1213, s);
    const double split = uniform(rng, 0.0, 1.0);
    std::vector<double> f(g->node_count());
    for (auto& x : f) x = uniform(rng, 0.0, 1.0) < 0.5 ? uniform(rng, 0.0, split) : -uniform(rng, 0.0, 1.0 - split);
    const auto d = sym_decompose(box, FunctionVector(f));
    if (d.certified() && box.functional()(d.u).finite() && box.functional()(d.v).finite()) ++certified;
  }
  if (certified != 100) o.fail(std::to_string(100 - certified) + " box decompositions not certified");
  o.detail << "sym = E_1 within " << worst << "; " << certified << "/100 box decompositions certified";
}

// Runs the CLI binary twice per config and compares the outputs without the
// wall-time field, byte for byte.
void criterion_13(Outcome& o) {
  if (cli_path.empty()) {
    o.fail("no CLI path given");
    return;
  }
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("nldf_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto base = [](const std::string& command) {
    return Json{{"schema_version", 1},
                {"command", command},
                {"graph", {{"generator", "grid"}, {"n", 5}, {"m", 4}}},
                {"functional", {{"kind", "p_energy"}, {"p", 2}}},
                {"functions", {{"f", {{"random", {{"scale", 2.0}}}}}}}};
  };
  std::vector<Json> configs;
  auto norm = base("norm");
  norm["params"] = {{"function", "f"}, {"alpha", 1.5}};
  configs.push_back(norm);
  auto semi = base("seminorm");
  semi["params"] = {{"function", "f"}};
  configs.push_back(semi);
  auto vn = base("verify-norms");
  vn["params"] = {{"samples", 50}};
  configs.push_back(vn);
  auto vd = base("verify-dirichlet");
  vd["params"] = {{"samples", 100}, {"contraction_samples", 100}, {"lattice_norm_samples", 20}};
  configs.push_back(vd);
  auto sc = base("sym-closure");
  sc["functional"] = {{"kind", "box_indicator"}, {"lower", 0}, {"upper", 1}};
  sc["functions"] = {{"f", {{"values", std::vector<double>(20, 0.25)}}}};
  sc["params"] = {{"function", "f"}, {"decompose", true}};
  configs.push_back(sc);
  auto cap = base("capacity");
  cap["params"] = {{"set", {{"box", {{"rows", Json::array({1, 2})}, {"cols", Json::array({1, 2})}}}}},
                   {"lemma_families", 3}};
  configs.push_back(cap);
  configs.push_back(Json{{"schema_version", 1}, {"command", "counterexamples"}, {"params", {{"n", 65}, {"k_max", 30}}}});
  auto ch = base("chebyshev-sweep");
  ch["params"] = {{"samples", 20}};
  configs.push_back(ch);

  auto strip = [](const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line))
      if (line.find("\"wall_time_s\"") == std::string::npos) out += line + "\n";
    return out;
  };
  std::size_t compared = 0;
  for (std::size_t k = 0; k < configs.size(); ++k) {
    const auto cfg = dir / ("config_" + std::to_string(k) + ".json");
    std::ofstream(cfg) << canonical_dump(configs[k]);
    std::string outputs[2];
    for (int run = 0; run < 2; ++run) {
      const auto out = dir / ("out_" + std::to_string(k) + "_" + std::to_string(run) + ".json");
      const std::string cmd = "\"" + cli_path + "\" --config \"" + cfg.string() + "\" --seed 1234 --out \"" +
                              out.string() + "\"";
      const int status = std::system(cmd.c_str());
      if (status != 0) o.fail(configs[k]["command"].get<std::string>() + " exited with " + std::to_string(status));
      outputs[run] = strip(read_text_file(out.string()));
    }
    if (outputs[0] != outputs[1]) o.fail(configs[k]["command"].get<std::string>() + " output differs");
    ++compared;
  }
  fs::remove_all(dir);
  o.detail << compared << " commands, identical output on two runs";
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<void(Outcome&)>> criteria{
      criterion_1, criterion_2, criterion_3, criterion_4,  criterion_5,  criterion_6, criterion_7,
      criterion_8, criterion_9, criterion_10, criterion_11, criterion_12, criterion_13};
  std::set<std::size_t> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (!a.empty() && std::isdigit(static_cast<unsigned char>(a[0]))) only.insert(std::stoul(a));
    else cli_path = a;
  }
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (!only.empty() && !only.count(k + 1)) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[k](o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    all = all && o.pass;
    std::printf("criterion %zu: %s (%s; %.1f s)\n", k + 1, o.pass ? "PASS" : "FAIL", o.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
