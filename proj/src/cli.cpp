#include "nldf/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "CLI11.hpp"
#include "nldf/capacity.hpp"
#include "nldf/dirichlet.hpp"
#include "nldf/generators.hpp"
#include "nldf/io.hpp"
#include "nldf/sampling.hpp"
#include "nldf/sym_closure.hpp"

namespace nldf {

namespace {

bool is_index(const Json& j) { return j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0); }

Json ext(ExtReal x) { return x.finite() ? Json(x.value()) : Json("+inf"); }
Json num(double x) { return std::isfinite(x) ? Json(x) : Json(x > 0 ? "+inf" : x < 0 ? "-inf" : "nan"); }

const char* status_name(NormStatus s) {
  switch (s) {
    case NormStatus::ok: return "ok";
    case NormStatus::not_in_space: return "not_in_space";
    case NormStatus::exceeds_range: return "exceeds_range";
  }
  return "unknown";
}

Json norm_json(const NormValue& v) {
  return {{"value", ext(v.value)},
          {"lower", num(v.lower)},
          {"upper", num(v.upper)},
          {"status", status_name(v.status)},
          {"evaluations", v.evaluations}};
}

double default_mesh(std::size_t n) { return n > 1 ? 1.0 / static_cast<double>(n - 1) : 1.0; }

struct GridShape {
  std::size_t n = 0, m = 0;
};

// Everything a command needs, resolved from the config.
struct Context {
  std::uint64_t seed = 0;
  GraphPtr graph;
  std::optional<GridShape> grid;
  std::optional<Functional> functional;
  NormSettings norm;
  CapacitySettings cap;
  DirichletThresholds th;
  std::map<std::string, FunctionVector> functions;

  const Functional& e() const {
    if (!functional) throw InputError("functional: missing required field");
    return *functional;
  }
  ModularProblem modular() const { return ModularProblem(e(), norm); }
  const FunctionVector& function(const std::string& name, const std::string& field) const {
    auto it = functions.find(name);
    if (it == functions.end()) throw InputError(field + ": unknown function '" + name + "'");
    return it->second;
  }
};

GraphPtr load_graph(Fields f, std::uint64_t seed, std::optional<GridShape>& grid) {
  if (f.has("file")) {
    auto path = f.string("file");
    f.finish();
    return std::make_shared<const MeasuredGraph>(graph_from_json(read_json_file(path)));
  }
  const auto gen = f.string("generator");
  const auto n = f.count("n");
  if (n < 2) throw InputError(f.field("n") + ": need n >= 2");
  const double p = f.number("p", 2.0);
  if (gen == "path") {
    const double mesh = f.number("mesh", default_mesh(n));
    f.finish();
    return std::make_shared<const MeasuredGraph>(path_graph(n, mesh, p));
  }
  if (gen == "grid") {
    const auto m = f.count("m", n);
    if (m < 1) throw InputError(f.field("m") + ": need m >= 1");
    const double mesh = f.number("mesh", default_mesh(n));
    f.finish();
    grid = GridShape{n, m};
    return std::make_shared<const MeasuredGraph>(grid_graph(n, m, mesh, p));
  }
  if (gen == "random") {
    const auto extra = f.count("extra_edges", n);
    f.finish();
    auto rng = make_stream(seed, 0x67726170ULL);
    return std::make_shared<const MeasuredGraph>(random_connected_graph(n, extra, rng));
  }
  throw InputError(f.field("generator") + ": unknown generator '" + gen + "'");
}

std::vector<std::size_t> resolve_set(const Json& j, const std::string& path, const Context& ctx) {
  Fields f(j, path);
  const std::size_t n = ctx.graph->node_count();
  std::vector<std::size_t> out;
  if (f.has("nodes")) {
    const Json& nodes = f.at("nodes");
    if (!nodes.is_array()) throw InputError(f.field("nodes") + ": expected an array");
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      if (!is_index(nodes[k]) || nodes[k].get<std::uint64_t>() >= n)
        throw InputError(f.field("nodes") + "[" + std::to_string(k) + "]: expected a node id below " +
                         std::to_string(n));
      out.push_back(nodes[k].get<std::size_t>());
    }
  } else if (f.has("box")) {
    if (!ctx.grid) throw InputError(f.field("box") + ": coordinate boxes need a grid generator");
    Fields b = f.object("box");
    auto range = [&b](const std::string& key, std::size_t limit) {
      const Json& r = b.at(key);
      if (!r.is_array() || r.size() != 2 || !is_index(r[0]) || !is_index(r[1]))
        throw InputError(b.field(key) + ": expected [first, last]");
      const auto lo = r[0].get<std::size_t>(), hi = r[1].get<std::size_t>();
      if (lo > hi || hi >= limit) throw InputError(b.field(key) + ": range outside the grid");
      return std::make_pair(lo, hi);
    };
    const auto rows = range("rows", ctx.grid->n), cols = range("cols", ctx.grid->m);
    b.finish();
    for (auto i = rows.first; i <= rows.second; ++i)
      for (auto jj = cols.first; jj <= cols.second; ++jj) out.push_back(i * ctx.grid->m + jj);
  } else if (f.has("superlevel")) {
    Fields s = f.object("superlevel");
    const auto& fn = ctx.function(s.string("function"), s.field("function"));
    const double level = s.number("level");
    const bool use_abs = s.boolean("abs", true);
    s.finish();
    for (std::size_t i = 0; i < n; ++i)
      if ((use_abs ? std::abs(fn[i]) : fn[i]) > level) out.push_back(i);
  } else {
    throw InputError(path + ": expected one of nodes, box, superlevel");
  }
  f.finish();
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

FunctionVector resolve_function(const std::string& name, const Json& j, const std::string& path, Context& ctx) {
  Fields f(j, path);
  const std::size_t n = ctx.graph->node_count();
  FunctionVector out;
  if (f.has("values")) {
    const Json& v = f.at("values");
    if (!v.is_array() || v.size() != n ||
        !std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_number(); }))
      throw InputError(f.field("values") + ": expected " + std::to_string(n) + " numbers");
    out = FunctionVector(v.get<std::vector<double>>());
  } else if (f.has("constant")) {
    out = FunctionVector::constant(n, f.number("constant"));
  } else if (f.has("random")) {
    Fields r = f.object("random");
    const double scale = r.number("scale", 1.0);
    r.finish();
    auto rng = make_stream(ctx.seed, fnv1a64(name));
    out = random_vector(n, rng, scale);
  } else if (f.has("indicator")) {
    out = indicator(n, resolve_set(f.at("indicator"), f.field("indicator"), ctx));
  } else {
    throw InputError(path + ": expected one of values, constant, random, indicator");
  }
  f.finish();
  return out;
}

const std::set<std::string>& command_names() {
  static const std::set<std::string> names{"norm",         "seminorm", "verify-dirichlet", "verify-norms",
                                           "sym-closure",  "capacity", "counterexamples",  "chebyshev-sweep"};
  return names;
}

// Collects check reports and their pass state.
struct Checks {
  Json list = Json::array();
  Json rows = Json::array();
  bool all_pass = true;
  std::string only;
  Json replay_config;

  bool wanted(const std::string& name) const { return only.empty() || only == name; }

  void add(const std::string& name, bool pass, Json body) {
    if (!wanted(name)) return;
    body["check"] = name;
    body["pass"] = pass;
    if (!pass) {
      all_pass = false;
      body["replay"] = {{"schema_version", schema_version}, {"config", replay_config}, {"check", name}};
    }
    list.push_back(body);
  }
  void add(const VerificationReport& r, const std::string& name) {
    if (!wanted(name)) return;
    auto j = to_json(r);
    j.erase("check");
    j.erase("pass");
    rows.push_back({{"check", name},
                    {"attempted", r.attempted},
                    {"failures", r.failures},
                    {"worst_margin", num(r.worst_margin)},
                    {"threshold", r.threshold}});
    add(name, r.pass(), j);
  }
};

std::uint64_t samples_param(Fields& p, const std::string& key, std::uint64_t fallback) {
  const auto s = p.count(key, fallback);
  if (s == 0) throw InputError(p.field(key) + ": need at least one sample");
  return s;
}

VerificationReport unit_ball_sweep(const ModularProblem& prob, std::size_t samples, std::uint64_t seed) {
  VerificationReport r;
  r.check = "unit_ball";
  r.seed = seed;
  for (std::size_t s = 0; s < samples; ++s) {
    auto rng = make_stream(seed, s);
    const double scale = std::exp(uniform(rng, std::log(1e-2), std::log(1e2)));
    const auto u = random_domain_vector(prob.functional(), rng, scale);
    const auto rep = check_unit_ball_property(prob, u);
    r.record(rep.pass() ? 0.0 : -1.0, [&] { return Json{{"u", u.vec()}, {"e1", rep.e1}, {"norm", rep.norm}}; });
  }
  return r;
}

void cmd_norm(Context& ctx, Fields& p, Json& values, bool semi) {
  const auto name = p.string("function");
  const auto& u = ctx.function(name, p.field("function"));
  const auto prob = ctx.modular();
  if (semi) {
    values["seminorm"] = norm_json(energy_seminorm(prob, u));
  } else if (p.has("alpha")) {
    const double alpha = p.number("alpha");
    if (!(alpha > 0.0)) throw InputError(p.field("alpha") + ": need alpha > 0");
    values["norm_alpha"] = norm_json(energy_norm_alpha(prob, u, alpha));
    values["alpha"] = alpha;
  } else {
    values["norm"] = norm_json(energy_norm(prob, u));
  }
  values["e"] = ext(prob.E(u.values()));
  values["e1"] = ext(prob.E1(u.values()));
  values["l2"] = l2_norm(prob.graph(), u);
  values["in_energy_space"] = in_energy_space(prob, u);
}

void cmd_verify_norms(Context& ctx, Fields& p, Json& values, Checks& checks) {
  const auto n = samples_param(p, "samples", 1000);
  const double rel = p.number("rel_tol", 1e-8);
  const auto prob = ctx.modular();
  if (checks.wanted("homogeneity") || checks.wanted("triangle") || checks.wanted("definiteness") ||
      checks.wanted("dominance")) {
    const auto ax = check_norm_axioms(prob, n, ctx.seed, rel);
    checks.add(ax.homogeneity, "homogeneity");
    checks.add(ax.triangle, "triangle");
    checks.add(ax.definiteness, "definiteness");
    checks.add(ax.dominance, "dominance");
  }
  if (checks.wanted("equivalence_chain")) {
    const auto eq = check_norm_equivalence(prob, n, ctx.seed + 1);
    checks.add(eq.chain, "equivalence_chain");
    values["worst_norm_over_sum"] = eq.worst_norm_over_sum;
    values["worst_sum_over_norm"] = eq.worst_sum_over_norm;
  }
  if (checks.wanted("unit_ball")) checks.add(unit_ball_sweep(prob, n, ctx.seed + 2), "unit_ball");
  values["samples"] = n;
}

void cmd_verify_dirichlet(Context& ctx, Fields& p, Json& values, Checks& checks) {
  const auto n = samples_param(p, "samples", 1000);
  const auto nc = samples_param(p, "contraction_samples", n);
  const auto nl = p.count("lattice_norm_samples", 100);
  if (checks.wanted("lattice") || checks.wanted("truncation") || checks.wanted("contraction") ||
      checks.wanted("converse")) {
    const auto d = verify_dirichlet(ctx.e(), n, nc, ctx.seed, ctx.th);
    checks.add(d.lattice, "lattice");
    checks.add(d.truncation, "truncation");
    checks.add(d.contraction, "contraction");
    checks.add(d.converse, "converse");
  }
  if (nl > 0 && ctx.e().is_symmetric() && checks.wanted("lattice_norm_bound"))
    checks.add(sweep_lattice_norm_bound(ctx.modular(), nl, ctx.seed + 1), "lattice_norm_bound");
  values["samples"] = n;
  values["contraction_samples"] = nc;
  values["symmetric"] = ctx.e().is_symmetric();
}

void cmd_sym_closure(Context& ctx, Fields& p, Json& values, Checks& checks) {
  const auto& f = ctx.function(p.string("function"), p.field("function"));
  const bool decompose = p.boolean("decompose", true);
  const SymClosureProblem prob(ctx.modular());
  const auto s = sym_eval(prob, f);
  const auto e1p = prob.base().E1(f.values()), e1m = prob.base().E1((-f).values());
  values["sym"] = {{"value", ext(s.value)},
                   {"lower", num(s.lower)},
                   {"lambda", s.lambda},
                   {"converged", s.converged},
                   {"inner_solves", s.inner_solves}};
  values["e1"] = ext(e1p);
  values["e1_negated"] = ext(e1m);
  values["in_domain"] = sym_domain_contains(prob, f);
  // sym E lies below both E_1(f) and E_1(-f).
  const double upper = std::min(e1p.value(), e1m.value());
  const double tol = 1e-6 * std::max(1.0, std::isfinite(upper) ? upper : 1.0);
  const bool below = s.value.infinite() ? !std::isfinite(upper) : s.value.value() <= upper + tol;
  checks.add("sym_below_e1", below, {{"sym", ext(s.value)}, {"bound", num(upper)}});
  if (ctx.e().is_symmetric()) {
    const bool equal = s.value.infinite() ? e1p.infinite()
                                          : e1p.finite() && std::abs(s.value.value() - e1p.value()) <= tol;
    checks.add("sym_equals_e1", equal, {{"sym", ext(s.value)}, {"e1", ext(e1p)}});
  }
  if (decompose && sym_domain_contains(prob, f)) {
    const auto d = sym_decompose(prob, f);
    values["decomposition"] = {{"u", d.u.vec()},
                               {"v", d.v.vec()},
                               {"lambda", d.lambda},
                               {"residual", d.residual},
                               {"u_in_domain", d.u_in_domain},
                               {"v_in_domain", d.v_in_domain}};
    checks.add("decomposition_certified", d.certified(), {{"residual", d.residual}});
  }
}

void cmd_capacity(Context& ctx, Fields& p, Json& values, Checks& checks, Json& rows) {
  const auto set = resolve_set(p.at("set"), p.field("set"), ctx);
  const auto radius = p.count("hull_radius", ctx.graph->neighborhood_radius());
  const bool with_potential = p.boolean("include_potential", false);
  const auto families = p.count("lemma_families", 0);
  const auto mp = ctx.modular();
  const CapacityProblem prob(mp, set, radius, ctx.cap);
  const auto r = capacity(prob);
  values["set"] = set;
  values["hull_size"] = prob.hull().size();
  values["capacity"] = {{"value", ext(r.value)},
                        {"lower", r.lower},
                        {"upper", num(r.upper)},
                        {"certified", r.certified},
                        {"feasibility_residual", r.feasibility_residual},
                        {"bisection_steps", r.bisection_steps},
                        {"iterations", r.iterations},
                        {"diagnostic", r.diagnostic}};
  if (with_potential) values["capacity"]["potential"] = r.potential.vec();
  const auto polar = check_polar_iff_empty(prob);
  checks.add("polar_iff_empty", polar.pass, {{"cap", polar.cap}, {"bound", polar.bound}, {"set", set}});
  checks.add("feasible_potential", r.feasibility_residual <= 1e-12, {{"residual", r.feasibility_residual}});
  if (families > 0) {
    const auto sw = sweep_capacity_lemmas(mp, families, ctx.seed, radius, ctx.cap);
    checks.add(sw.monotone, "cap_monotone");
    checks.add(sw.subadditive, "cap_subadditive");
    checks.add(sw.countable, "cap_countably_subadditive");
    checks.add(sw.decreasing, "cap_decreasing_sets");
    checks.add(sw.polar, "polar_sweep");
  }
  (void)rows;
}

void cmd_counterexamples(Context& ctx, Fields& p, Json& values, Checks& checks, Json& rows) {
  const auto which = p.string("which", "all");
  if (which != "all" && which != "linf" && which != "lipschitz")
    throw InputError(p.field("which") + ": expected linf, lipschitz, or all");
  if (which != "lipschitz") {
    const auto n = p.count("linf_n", 16);
    if (n < 2 || n % 2) throw InputError(p.field("linf_n") + ": need an even n >= 2");
    const auto c = run_linf_counterexample(n, ctx.th);
    values["linf"] = {{"n", c.n},           {"norm_f", c.norm_f}, {"norm_min", c.norm_min},
                      {"norm_max", c.norm_max}, {"norm_zero", c.norm_zero}, {"lhs", c.lhs},
                      {"rhs", c.rhs}};
    checks.add("linf", c.pass, {{"lhs", c.lhs}, {"rhs", c.rhs}});
  }
  if (which != "linf") {
    const auto n = p.count("n", 256);
    const auto k_max = p.count("k_max", 1000);
    const bool aligned = p.boolean("kink_aligned", true);
    if (n < 3) throw InputError(p.field("n") + ": need n >= 3");
    if (k_max < 1) throw InputError(p.field("k_max") + ": need k_max >= 1");
    const auto c = run_lipschitz_counterexample(n, k_max, aligned, ctx.th);
    values["lipschitz"] = {{"n", c.n},
                           {"k_max", k_max},
                           {"kink_aligned", c.kink_aligned},
                           {"worst_g_ratio", c.worst_g_ratio},
                           {"min_f_min_g", c.min_f_min_g}};
    for (const auto& r : c.rows)
      rows.push_back({{"k", r.k}, {"norm_g", r.norm_g}, {"norm_f_min_g", r.norm_f_min_g},
                      {"kink_position", r.kink_position}});
    checks.add("lipschitz", c.pass, {{"worst_g_ratio", c.worst_g_ratio}, {"min_f_min_g", c.min_f_min_g}});
  }
}

void cmd_chebyshev(Context& ctx, Fields& p, Json& values, Checks& checks) {
  const auto n = samples_param(p, "samples", 200);
  checks.add(sweep_chebyshev(ctx.modular(), n, ctx.seed, ctx.cap), "chebyshev");
  values["samples"] = n;
}

}  // namespace

RunOutput run_config(const Json& config, std::optional<std::uint64_t> seed_override, const std::string& only_check) {
  Fields top(config, "");
  if (top.count("schema_version") != static_cast<std::uint64_t>(schema_version))
    throw InputError("schema_version: unsupported version");
  const auto command = top.string("command");
  if (!command_names().count(command)) throw InputError("command: unknown command '" + command + "'");

  Context ctx;
  ctx.seed = seed_override ? *seed_override : top.count("seed", 0);
  Json resolved = config;
  resolved["seed"] = ctx.seed;

  if (top.has("tolerances")) {
    Fields t = top.object("tolerances");
    ctx.norm.tol = t.number("norm_tol", ctx.norm.tol);
    ctx.cap.outer_tol = t.number("outer_tol", ctx.cap.outer_tol);
    ctx.th.inequality = t.number("inequality", ctx.th.inequality);
    t.finish();
    if (!(ctx.norm.tol > 0.0) || !(ctx.cap.outer_tol > 0.0) || !(ctx.th.inequality >= 0.0))
      throw InputError("tolerances: values must be positive");
  }

  const bool needs_graph = command != "counterexamples";
  Json graph_json;
  if (top.has("graph")) {
    ctx.graph = load_graph(top.object("graph"), ctx.seed, ctx.grid);
    graph_json = graph_to_json(*ctx.graph);
  } else if (needs_graph) {
    throw InputError("graph: missing required field");
  }
  if (top.has("functional")) {
    if (!ctx.graph) throw InputError("functional: needs a graph");
    ctx.functional = functional_from_json(top.at("functional"), ctx.graph);
  } else if (needs_graph) {
    throw InputError("functional: missing required field");
  }
  if (top.has("functions")) {
    const Json& fs = top.at("functions");
    if (!fs.is_object()) throw InputError("functions: expected an object");
    if (!ctx.graph) throw InputError("functions: needs a graph");
    // Indicators may refer to superlevel sets of earlier names; resolve in key order.
    for (auto it = fs.begin(); it != fs.end(); ++it)
      ctx.functions[it.key()] = resolve_function(it.key(), it.value(), "functions." + it.key(), ctx);
  }
  Json params = top.has("params") ? top.at("params") : Json::object();
  top.finish();
  Fields p(params, "params");

  Checks checks;
  checks.only = only_check;
  checks.replay_config = resolved;
  Json values = Json::object();
  Json rows = Json::array();
  if (command == "norm") cmd_norm(ctx, p, values, false);
  else if (command == "seminorm") cmd_norm(ctx, p, values, true);
  else if (command == "verify-norms") cmd_verify_norms(ctx, p, values, checks);
  else if (command == "verify-dirichlet") cmd_verify_dirichlet(ctx, p, values, checks);
  else if (command == "sym-closure") cmd_sym_closure(ctx, p, values, checks);
  else if (command == "capacity") cmd_capacity(ctx, p, values, checks, rows);
  else if (command == "counterexamples") cmd_counterexamples(ctx, p, values, checks, rows);
  else cmd_chebyshev(ctx, p, values, checks);
  p.finish();
  if (!only_check.empty() && checks.list.empty())
    throw InputError("replay: command '" + command + "' has no check named '" + only_check + "'");

  RunOutput out;
  const Json inputs{{"config", resolved}, {"graph", graph_json}};
  out.document = {{"schema_version", schema_version},
                  {"command", command},
                  {"seed", ctx.seed},
                  {"digest", hex64(fnv1a64(canonical_dump(inputs)))},
                  {"inputs", resolved},
                  {"values", values},
                  {"checks", checks.list},
                  {"pass", checks.all_pass}};
  if (!rows.empty()) out.document["rows"] = rows;
  out.rows = rows.empty() ? checks.rows : rows;
  out.status = checks.all_pass ? 0 : 2;
  return out;
}

std::string generate_graph(const std::string& kind, std::size_t n, std::size_t m, double mesh, double p,
                           std::size_t radius, const std::string& file) {
  if (kind == "file") {
    if (file.empty()) throw InputError("generate-graph file: --in is required");
    return canonical_dump(graph_to_json(graph_from_json(read_json_file(file))));
  }
  if (n < 2) throw InputError("generate-graph: need n >= 2");
  if (!(mesh > 0.0)) mesh = default_mesh(n);
  auto with_radius = [radius](const MeasuredGraph& g) {
    return MeasuredGraph({g.measure().begin(), g.measure().end()}, {g.edges().begin(), g.edges().end()}, radius);
  };
  if (kind == "path") return canonical_dump(graph_to_json(with_radius(path_graph(n, mesh, p))));
  if (kind == "grid") {
    if (m < 1) m = n;
    return canonical_dump(graph_to_json(with_radius(grid_graph(n, m, mesh, p))));
  }
  throw InputError("generate-graph: expected path, grid, or file");
}

std::string rows_to_csv(const Json& rows) {
  if (rows.empty()) return "";
  std::vector<std::string> keys;
  for (const auto& r : rows)
    for (auto it = r.begin(); it != r.end(); ++it)
      if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) keys.push_back(it.key());
  std::string out;
  auto cell = [](const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) {
      std::string s = canonical_dump(v);
      s.pop_back();
      return s;
    }
    return v.dump();
  };
  for (std::size_t k = 0; k < keys.size(); ++k) out += (k ? "," : "") + keys[k];
  out += "\n";
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < keys.size(); ++k) {
      if (k) out += ",";
      if (r.contains(keys[k])) out += cell(r.at(keys[k]));
    }
    out += "\n";
  }
  return out;
}

namespace {

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw InputError("cannot write " + out);
  f << text;
}

// A replay file is a result document (first failing check) or one replay object.
std::pair<Json, std::string> load_replay(const std::string& path) {
  const Json j = read_json_file(path);
  const Json* r = nullptr;
  if (j.contains("config") && j.contains("check")) {
    r = &j;
  } else if (j.contains("checks") && j.at("checks").is_array()) {
    for (const auto& c : j.at("checks"))
      if (c.contains("replay")) {
        r = &c.at("replay");
        break;
      }
  }
  if (!r) throw InputError(path + ": no replayable failure found");
  if (!r->at("check").is_string()) throw InputError(path + ": check must be a string");
  return {r->at("config"), r->at("check").get<std::string>()};
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Energy spaces, Dirichlet-form checks, and capacities on weighted graphs", "nldf"};
  std::string config_path, out_path, format = "json", replay_path;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> positional;
  app.add_option("--config", config_path, "Experiment config (JSON)");
  app.add_option("--seed", seed, "RNG seed; overrides the config");
  app.add_option("--out", out_path, "Output file (default: stdout)");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--replay", replay_path, "Re-run the failing check recorded in a result or witness file");
  app.add_option("command", positional, "Command override, e.g. `counterexamples linf`");

  auto* gen = app.add_subcommand("generate-graph", "Emit a graph file");
  std::string gen_kind, gen_in;
  std::size_t gen_n = 0, gen_m = 0, gen_radius = 0;
  double gen_mesh = 0.0, gen_p = 2.0;
  gen->add_option("kind", gen_kind, "path | grid | file")->required()->check(CLI::IsMember({"path", "grid", "file"}));
  gen->add_option("--n", gen_n, "Nodes (path) or rows (grid)");
  gen->add_option("--m", gen_m, "Grid columns (default n)");
  gen->add_option("--mesh", gen_mesh, "Mesh width h (default 1/(n-1))");
  gen->add_option("--p", gen_p, "Exponent used for the edge weights");
  gen->add_option("--radius", gen_radius, "neighborhood_radius");
  gen->add_option("--in", gen_in, "Graph file to validate and re-emit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen) {
      emit(generate_graph(gen_kind, gen_n, gen_m, gen_mesh, gen_p, gen_radius, gen_in), out_path);
      return 0;
    }
    Json config;
    std::string only;
    if (!replay_path.empty()) {
      std::tie(config, only) = load_replay(replay_path);
    } else if (!config_path.empty()) {
      config = read_json_file(config_path);
    } else {
      config = {{"schema_version", schema_version}};
    }
    if (!positional.empty()) {
      if (!config.is_object()) throw InputError("config: expected an object");
      config["command"] = positional[0];
      if (positional.size() > 2) throw InputError("too many positional arguments");
      if (positional.size() == 2) {
        if (positional[0] != "counterexamples") throw InputError(positional[0] + ": takes no argument");
        config["params"]["which"] = positional[1];
      }
    }
    const auto t0 = std::chrono::steady_clock::now();
    auto res = run_config(config, seed, only);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (format == "csv") {
      emit(rows_to_csv(res.rows), out_path);
    } else {
      res.document["wall_time_s"] = wall;
      emit(canonical_dump(res.document), out_path);
    }
    if (res.status != 0) std::cerr << "nldf: property violation (see failing checks)\n";
    return res.status;
  } catch (const InputError& e) {
    std::cerr << "nldf: input error: " << e.what() << "\n";
    return 1;
  } catch (const Json::exception& e) {
    std::cerr << "nldf: input error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace nldf
