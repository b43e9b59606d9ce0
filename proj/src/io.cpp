#include "nldf/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nldf {

namespace {

void put_number(std::string& out, double x) {
  if (!std::isfinite(x)) {
    out += "null";
    return;
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  out.append(buf, res.ptr);
}

bool scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

void dump(const Json& j, std::string& out, int depth) {
  const std::string pad(2 * (depth + 1), ' '), close(2 * depth, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      std::vector<std::string> keys;
      for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
      std::sort(keys.begin(), keys.end());
      out += "{\n";
      for (std::size_t k = 0; k < keys.size(); ++k) {
        out += pad + Json(keys[k]).dump() + ": ";
        dump(j.at(keys[k]), out, depth + 1);
        out += k + 1 < keys.size() ? ",\n" : "\n";
      }
      out += close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Scalar arrays stay on one line.
      if (std::all_of(j.begin(), j.end(), scalar)) {
        out += "[";
        for (std::size_t k = 0; k < j.size(); ++k) {
          if (k) out += ", ";
          dump(j[k], out, depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        out += pad;
        dump(j[k], out, depth + 1);
        out += k + 1 < j.size() ? ",\n" : "\n";
      }
      out += close + "]";
      return;
    }
    case Json::value_t::number_float:
      put_number(out, j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

const std::vector<std::string>& kind_names() {
  static const std::vector<std::string> names{"p_energy",     "px_energy",     "lipschitz_indicator",
                                              "linf_ball_indicator", "box_indicator", "positive_part_p_energy",
                                              "lalpha_perturbation", "scaled",   "sum"};
  return names;
}

}  // namespace

std::string canonical_dump(const Json& j) {
  std::string out;
  dump(j, out, 0);
  out += "\n";
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

Json graph_to_json(const MeasuredGraph& g) {
  Json nodes = Json::array(), edges = Json::array();
  for (std::size_t i = 0; i < g.node_count(); ++i) nodes.push_back({{"id", i}, {"measure", g.measure(i)}});
  for (const auto& e : g.edges()) edges.push_back({{"a", e.a}, {"b", e.b}, {"w", e.weight}});
  return {{"schema_version", schema_version},
          {"neighborhood_radius", g.neighborhood_radius()},
          {"nodes", nodes},
          {"edges", edges}};
}

MeasuredGraph graph_from_json(const Json& j) {
  Fields f(j, "graph");
  if (f.count("schema_version") != static_cast<std::uint64_t>(schema_version))
    throw InputError(f.field("schema_version") + ": unsupported version");
  const auto radius = f.count("neighborhood_radius", 0);
  const Json& nodes = f.at("nodes");
  const Json& edges = f.at("edges");
  f.finish();
  if (!nodes.is_array()) throw InputError("graph.nodes: expected an array");
  if (!edges.is_array()) throw InputError("graph.edges: expected an array");
  std::vector<double> measure(nodes.size(), 0.0);
  std::vector<bool> seen(nodes.size(), false);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    Fields nf(nodes[k], "graph.nodes[" + std::to_string(k) + "]");
    const auto id = nf.count("id");
    if (id >= nodes.size() || seen[id]) throw InputError(nf.field("id") + ": ids must be a permutation of 0..n-1");
    seen[id] = true;
    measure[id] = nf.number("measure");
    nf.finish();
  }
  std::vector<Edge> out;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    Fields ef(edges[k], "graph.edges[" + std::to_string(k) + "]");
    Edge e;
    e.a = ef.count("a");
    e.b = ef.count("b");
    e.weight = ef.number("w");
    ef.finish();
    out.push_back(e);
  }
  return MeasuredGraph(std::move(measure), std::move(out), radius);
}

Json functional_to_json(const Functional& e) {
  Json j{{"kind", to_string(e.kind())}};
  switch (e.kind()) {
    case FunctionalKind::p_energy:
    case FunctionalKind::positive_part_p_energy:
      j["p"] = e.exponent();
      break;
    case FunctionalKind::px_energy:
      j["exponents"] = std::vector<double>(e.exponents().begin(), e.exponents().end());
      break;
    case FunctionalKind::lipschitz_indicator:
      j["L"] = e.bound();
      break;
    case FunctionalKind::linf_ball_indicator:
      j["c"] = e.bound();
      break;
    case FunctionalKind::box_indicator:
      j["lower"] = e.lower();
      j["upper"] = e.upper();
      break;
    case FunctionalKind::lalpha_perturbation:
      j["alpha"] = e.alpha();
      j["base"] = functional_to_json(e.children().front());
      break;
    case FunctionalKind::scaled:
      j["factor"] = e.factor();
      j["base"] = functional_to_json(e.children().front());
      break;
    case FunctionalKind::sum: {
      Json terms = Json::array();
      for (const auto& c : e.children()) terms.push_back(functional_to_json(c));
      j["terms"] = terms;
      break;
    }
  }
  return j;
}

namespace {
Functional functional_at(const Json& j, const GraphPtr& g, const std::string& path) {
  Fields f(j, path);
  const auto kind = f.string("kind");
  const auto& names = kind_names();
  if (std::find(names.begin(), names.end(), kind) == names.end())
    throw InputError(f.field("kind") + ": unknown kind '" + kind + "'");
  auto done = [&f](Functional e) {
    f.finish();
    return e;
  };
  if (kind == "p_energy") return done(Functional::p_energy(g, f.number("p")));
  if (kind == "positive_part_p_energy") return done(Functional::positive_part_p_energy(g, f.number("p")));
  if (kind == "px_energy") {
    const Json& ex = f.at("exponents");
    std::vector<double> v;
    if (ex.is_number()) v.assign(g->edge_count(), ex.get<double>());
    else if (ex.is_array() && std::all_of(ex.begin(), ex.end(), [](const Json& x) { return x.is_number(); }))
      v = ex.get<std::vector<double>>();
    else throw InputError(f.field("exponents") + ": expected a number or an array of numbers");
    return done(Functional::px_energy(g, std::move(v)));
  }
  if (kind == "lipschitz_indicator") return done(Functional::lipschitz_indicator(g, f.number("L")));
  if (kind == "linf_ball_indicator") return done(Functional::linf_ball_indicator(g, f.number("c")));
  if (kind == "box_indicator") return done(Functional::box_indicator(g, f.number("lower"), f.number("upper")));
  if (kind == "lalpha_perturbation") {
    const double alpha = f.number("alpha");
    return done(Functional::lalpha_perturbation(functional_at(f.at("base"), g, f.field("base")), alpha));
  }
  if (kind == "scaled") {
    const double factor = f.number("factor");
    return done(Functional::scaled(functional_at(f.at("base"), g, f.field("base")), factor));
  }
  const Json& terms = f.at("terms");
  if (!terms.is_array()) throw InputError(f.field("terms") + ": expected an array");
  std::vector<Functional> ts;
  for (std::size_t k = 0; k < terms.size(); ++k)
    ts.push_back(functional_at(terms[k], g, f.field("terms") + "[" + std::to_string(k) + "]"));
  return done(Functional::sum(ts));
}
}  // namespace

Functional functional_from_json(const Json& j, const GraphPtr& g) { return functional_at(j, g, "functional"); }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json read_json_file(const std::string& path) {
  const auto text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // Report line and column of the failing byte.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
}

Fields::Fields(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
  if (!j_.is_object()) throw InputError(path_ + ": expected an object");
}

std::string Fields::field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

bool Fields::has(const std::string& key) const { return j_.contains(key); }

const Json& Fields::at(const std::string& key) {
  if (!j_.contains(key)) throw InputError(field(key) + ": missing required field");
  seen_.push_back(key);
  return j_.at(key);
}

Fields Fields::object(const std::string& key) { return Fields(at(key), field(key)); }

double Fields::number(const std::string& key) {
  const Json& v = at(key);
  if (!v.is_number()) throw InputError(field(key) + ": expected a number");
  return v.get<double>();
}

double Fields::number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

std::uint64_t Fields::count(const std::string& key) {
  const Json& v = at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
  throw InputError(field(key) + ": expected a non-negative integer");
}

std::uint64_t Fields::count(const std::string& key, std::uint64_t fallback) {
  return has(key) ? count(key) : fallback;
}

std::string Fields::string(const std::string& key) {
  const Json& v = at(key);
  if (!v.is_string()) throw InputError(field(key) + ": expected a string");
  return v.get<std::string>();
}

std::string Fields::string(const std::string& key, const std::string& fallback) {
  return has(key) ? string(key) : fallback;
}

bool Fields::boolean(const std::string& key, bool fallback) {
  if (!has(key)) return fallback;
  const Json& v = at(key);
  if (!v.is_boolean()) throw InputError(field(key) + ": expected true or false");
  return v.get<bool>();
}

void Fields::finish() const {
  for (auto it = j_.begin(); it != j_.end(); ++it)
    if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end())
      throw InputError(field(it.key()) + ": unknown key");
}

}  // namespace nldf
