#include "nldf/functional.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace nldf {

namespace {

using NodePtr = std::shared_ptr<const Functional::Node>;
constexpr double inf = std::numeric_limits<double>::infinity();

double abs_pow(double d, double p) {
  const double a = std::abs(d);
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  return std::pow(a, p);
}

// d/dd of |d|^p / p = sign(d) |d|^{p-1}; zero at d = 0 (a valid subgradient for p = 1).
double abs_pow_slope(double d, double p) {
  if (d == 0.0) return 0.0;
  const double s = d > 0.0 ? 1.0 : -1.0;
  if (p == 1.0) return s;
  if (p == 2.0) return d;
  return s * std::pow(std::abs(d), p - 1.0);
}

ExtReal evaluate(const Functional::Node& n, const MeasuredGraph& g, std::span<const double> x) {
  auto edges = g.edges();
  switch (n.kind) {
    case FunctionalKind::p_energy: {
      double s = 0.0;
      for (const auto& e : edges) s += e.weight * abs_pow(x[e.a] - x[e.b], n.p);
      return s / n.p;
    }
    case FunctionalKind::px_energy: {
      double s = 0.0;
      for (std::size_t k = 0; k < edges.size(); ++k) {
        const auto& e = edges[k];
        s += e.weight * abs_pow(x[e.a] - x[e.b], n.exponents[k]) / n.exponents[k];
      }
      return s;
    }
    case FunctionalKind::positive_part_p_energy: {
      double s = 0.0;
      for (const auto& e : edges) s += e.weight * abs_pow(positive_part(x[e.a] - x[e.b]), n.p);
      return s;
    }
    case FunctionalKind::lipschitz_indicator: {
      for (const auto& e : edges)
        if (e.weight * std::abs(x[e.a] - x[e.b]) - n.bound > indicator_tolerance) return ExtReal::infinity();
      return 0.0;
    }
    case FunctionalKind::linf_ball_indicator: {
      for (double v : x)
        if (std::abs(v) - n.bound > indicator_tolerance) return ExtReal::infinity();
      return 0.0;
    }
    case FunctionalKind::box_indicator: {
      for (double v : x)
        if (n.lower - v > indicator_tolerance || v - n.upper > indicator_tolerance) return ExtReal::infinity();
      return 0.0;
    }
    case FunctionalKind::lalpha_perturbation: {
      ExtReal base = evaluate(*n.children[0], g, x);
      if (base.infinite()) return base;
      double s = 0.0;
      auto m = g.measure();
      for (std::size_t i = 0; i < x.size(); ++i) s += m[i] * abs_pow(x[i], n.alpha);
      return base + s;
    }
    case FunctionalKind::scaled:
      return evaluate(*n.children[0], g, x).scaled(n.factor);
    case FunctionalKind::sum: {
      ExtReal s = 0.0;
      for (const auto& c : n.children) {
        s += evaluate(*c, g, x);
        if (s.infinite()) return s;
      }
      return s;
    }
  }
  return ExtReal::infinity();
}

void subgradient(const Functional::Node& n, const MeasuredGraph& g, std::span<const double> x, std::span<double> out,
                 double factor) {
  auto edges = g.edges();
  switch (n.kind) {
    case FunctionalKind::p_energy:
      for (const auto& e : edges) {
        const double s = factor * e.weight * abs_pow_slope(x[e.a] - x[e.b], n.p);
        out[e.a] += s;
        out[e.b] -= s;
      }
      return;
    case FunctionalKind::px_energy:
      for (std::size_t k = 0; k < edges.size(); ++k) {
        const auto& e = edges[k];
        const double s = factor * e.weight * abs_pow_slope(x[e.a] - x[e.b], n.exponents[k]);
        out[e.a] += s;
        out[e.b] -= s;
      }
      return;
    case FunctionalKind::positive_part_p_energy:
      for (const auto& e : edges) {
        const double d = positive_part(x[e.a] - x[e.b]);
        if (d == 0.0) continue;
        const double s = factor * e.weight * n.p * (n.p == 1.0 ? 1.0 : std::pow(d, n.p - 1.0));
        out[e.a] += s;
        out[e.b] -= s;
      }
      return;
    case FunctionalKind::lipschitz_indicator:
    case FunctionalKind::linf_ball_indicator:
    case FunctionalKind::box_indicator:
      return;
    case FunctionalKind::lalpha_perturbation: {
      subgradient(*n.children[0], g, x, out, factor);
      auto m = g.measure();
      for (std::size_t i = 0; i < x.size(); ++i) out[i] += factor * n.alpha * m[i] * abs_pow_slope(x[i], n.alpha);
      return;
    }
    case FunctionalKind::scaled:
      subgradient(*n.children[0], g, x, out, factor * n.factor);
      return;
    case FunctionalKind::sum:
      for (const auto& c : n.children) subgradient(*c, g, x, out, factor);
      return;
  }
}

// Huber smoothing of w |d|: value, slope, and the affine model w clip(d/mu) d
// that stays below w |d| for every d.
struct Huber {
  double value, slope, model;
};
Huber huber(double d, double mu) {
  const double a = std::abs(d);
  if (a <= mu) return {0.5 * d * d / mu, d / mu, d * d / mu};
  return {a - 0.5 * mu, d > 0.0 ? 1.0 : -1.0, a};
}
Huber huber_plus(double d, double mu) {
  if (d <= 0.0) return {0.0, 0.0, 0.0};
  if (d <= mu) return {0.5 * d * d / mu, d / mu, d * d / mu};
  return {d - 0.5 * mu, 1.0, d};
}

struct SmoothAcc {
  double smoothed = 0.0;
  double model = 0.0;
  bool infinite = false;
  bool skip_l1 = false;  // leave exponent-1 edge terms out entirely
  std::vector<Functional::L1Term>* l1 = nullptr;  // collect them instead
};

void smoothed_term(const Functional::Node& n, const MeasuredGraph& g, std::span<const double> x, double mu,
                   std::span<double> out, double factor, SmoothAcc& acc) {
  auto edges = g.edges();
  auto edge_term = [&](const Edge& e, double p, double coef, bool plus) {
    const double d = x[e.a] - x[e.b];
    double val, slope, model;
    if (p == 1.0 && acc.l1) acc.l1->push_back({e.a, e.b, factor * coef * e.weight, plus});
    if (p == 1.0 && acc.skip_l1) return;
    if (p == 1.0) {
      const Huber h = plus ? huber_plus(d, mu) : huber(d, mu);
      val = h.value;
      slope = h.slope;
      model = h.model;
    } else if (plus) {
      const double dp = positive_part(d);
      val = model = abs_pow(dp, p);
      slope = dp == 0.0 ? 0.0 : p * std::pow(dp, p - 1.0);
    } else {
      val = model = abs_pow(d, p) / p;
      slope = abs_pow_slope(d, p);
    }
    const double c = factor * coef * e.weight;
    acc.smoothed += c * val;
    acc.model += c * model;
    out[e.a] += c * slope;
    out[e.b] -= c * slope;
  };
  switch (n.kind) {
    case FunctionalKind::p_energy:
      for (const auto& e : edges) edge_term(e, n.p, 1.0, false);
      return;
    case FunctionalKind::px_energy:
      for (std::size_t k = 0; k < edges.size(); ++k) edge_term(edges[k], n.exponents[k], 1.0, false);
      return;
    case FunctionalKind::positive_part_p_energy:
      for (const auto& e : edges) edge_term(e, n.p, 1.0, true);
      return;
    case FunctionalKind::lipschitz_indicator:
    case FunctionalKind::linf_ball_indicator:
    case FunctionalKind::box_indicator:
      if (evaluate(n, g, x).infinite()) acc.infinite = true;
      return;
    case FunctionalKind::lalpha_perturbation: {
      smoothed_term(*n.children[0], g, x, mu, out, factor, acc);
      auto m = g.measure();
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = factor * m[i] * abs_pow(x[i], n.alpha);
        acc.smoothed += v;
        acc.model += v;
        out[i] += factor * n.alpha * m[i] * abs_pow_slope(x[i], n.alpha);
      }
      return;
    }
    case FunctionalKind::scaled:
      smoothed_term(*n.children[0], g, x, mu, out, factor * n.factor, acc);
      return;
    case FunctionalKind::sum:
      for (const auto& c : n.children) smoothed_term(*c, g, x, mu, out, factor, acc);
      return;
  }
}

void collect_domain(const Functional::Node& n, const MeasuredGraph& g, DomainConstraints& dc) {
  switch (n.kind) {
    case FunctionalKind::lipschitz_indicator:
      for (std::size_t k = 0; k < g.edge_count(); ++k) dc.slopes.push_back({k, -n.bound, n.bound});
      return;
    case FunctionalKind::linf_ball_indicator:
      dc.intersect_box(-n.bound, n.bound);
      return;
    case FunctionalKind::box_indicator:
      dc.intersect_box(n.lower, n.upper);
      return;
    case FunctionalKind::lalpha_perturbation:
    case FunctionalKind::scaled:
      collect_domain(*n.children[0], g, dc);
      return;
    case FunctionalKind::sum:
      for (const auto& c : n.children) collect_domain(*c, g, dc);
      return;
    default:
      return;
  }
}

bool symmetric(const Functional::Node& n) {
  switch (n.kind) {
    case FunctionalKind::positive_part_p_energy:
      return false;
    case FunctionalKind::box_indicator:
      return n.lower == -n.upper;
    case FunctionalKind::lalpha_perturbation:
    case FunctionalKind::scaled:
      return symmetric(*n.children[0]);
    case FunctionalKind::sum:
      for (const auto& c : n.children)
        if (!symmetric(*c)) return false;
      return true;
    default:
      return true;
  }
}

bool quasilinear(const Functional::Node& n) {
  switch (n.kind) {
    case FunctionalKind::lipschitz_indicator:
    case FunctionalKind::linf_ball_indicator:
    case FunctionalKind::box_indicator:
      return false;
    case FunctionalKind::lalpha_perturbation:
    case FunctionalKind::scaled:
      return quasilinear(*n.children[0]);
    case FunctionalKind::sum:
      for (const auto& c : n.children)
        if (!quasilinear(*c)) return false;
      return true;
    default:
      return true;
  }
}

bool smooth(const Functional::Node& n) {
  switch (n.kind) {
    case FunctionalKind::p_energy:
    case FunctionalKind::positive_part_p_energy:
      return n.p > 1.0;
    case FunctionalKind::px_energy:
      for (double p : n.exponents)
        if (p <= 1.0) return false;
      return true;
    case FunctionalKind::lalpha_perturbation:
      return n.alpha > 1.0 && smooth(*n.children[0]);
    case FunctionalKind::scaled:
      return smooth(*n.children[0]);
    case FunctionalKind::sum:
      for (const auto& c : n.children)
        if (!smooth(*c)) return false;
      return true;
    default:
      return true;
  }
}

bool energy_part(const Functional::Node& n) {
  switch (n.kind) {
    case FunctionalKind::lipschitz_indicator:
    case FunctionalKind::linf_ball_indicator:
    case FunctionalKind::box_indicator:
      return false;
    case FunctionalKind::scaled:
      return energy_part(*n.children[0]);
    case FunctionalKind::sum:
      for (const auto& c : n.children)
        if (energy_part(*c)) return true;
      return false;
    default:
      return true;
  }
}

void describe(const Functional::Node& n, std::ostream& os) {
  os << to_string(n.kind);
  switch (n.kind) {
    case FunctionalKind::p_energy:
    case FunctionalKind::positive_part_p_energy:
      os << "(p=" << n.p << ")";
      return;
    case FunctionalKind::px_energy:
      os << "(" << n.exponents.size() << " exponents)";
      return;
    case FunctionalKind::lipschitz_indicator:
      os << "(L=" << n.bound << ")";
      return;
    case FunctionalKind::linf_ball_indicator:
      os << "(c=" << n.bound << ")";
      return;
    case FunctionalKind::box_indicator:
      os << "(" << n.lower << "," << n.upper << ")";
      return;
    case FunctionalKind::lalpha_perturbation:
      os << "(alpha=" << n.alpha << ", ";
      describe(*n.children[0], os);
      os << ")";
      return;
    case FunctionalKind::scaled:
      os << "(" << n.factor << ", ";
      describe(*n.children[0], os);
      os << ")";
      return;
    case FunctionalKind::sum:
      os << "(";
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) os << ", ";
        describe(*n.children[i], os);
      }
      os << ")";
      return;
  }
}

void require_exponent(double p, const char* what) {
  if (!std::isfinite(p) || p < 1.0) throw InputError(std::string(what) + " exponent must be finite and >= 1");
}

}  // namespace

std::string to_string(FunctionalKind k) {
  switch (k) {
    case FunctionalKind::p_energy: return "p_energy";
    case FunctionalKind::px_energy: return "px_energy";
    case FunctionalKind::lipschitz_indicator: return "lipschitz_indicator";
    case FunctionalKind::linf_ball_indicator: return "linf_ball_indicator";
    case FunctionalKind::box_indicator: return "box_indicator";
    case FunctionalKind::positive_part_p_energy: return "positive_part_p_energy";
    case FunctionalKind::lalpha_perturbation: return "lalpha_perturbation";
    case FunctionalKind::scaled: return "scaled";
    case FunctionalKind::sum: return "sum";
  }
  return "unknown";
}

Functional Functional::p_energy(GraphPtr g, double p) {
  require_exponent(p, "p_energy");
  auto n = std::make_shared<Node>();
  n->kind = FunctionalKind::p_energy;
  n->p = p;
  return Functional(std::move(g), std::move(n));
}

Functional Functional::px_energy(GraphPtr g, std::vector<double> exponents) {
  if (exponents.size() != g->edge_count())
    throw InputError("px_energy needs one exponent per edge (" + std::to_string(g->edge_count()) + ")");
  for (double p : exponents) require_exponent(p, "px_energy");
  auto n = std::make_shared<Node>();
  n->kind = FunctionalKind::px_energy;
  n->exponents = std::move(exponents);
  return Functional(std::move(g), std::move(n));
}

Functional Functional::lipschitz_indicator(GraphPtr g, double slope_bound) {
  if (!(slope_bound > 0.0) || !std::isfinite(slope_bound)) throw InputError("lipschitz bound L must be > 0");
  auto n = std::make_shared<Node>();
  n->kind = FunctionalKind::lipschitz_indicator;
  n->bound = slope_bound;
  return Functional(std::move(g), std::move(n));
}

Functional Functional::linf_ball_indicator(GraphPtr g, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InputError("linf ball bound c must be > 0");
  auto n = std::make_shared<Node>();
  n->kind = FunctionalKind::linf_ball_indicator;
  n->bound = c;
  return Functional(std::move(g), std::move(n));
}

Functional Functional::box_indicator(GraphPtr g, double lower, double upper) {
  if (!(lower <= 0.0) || !(upper >= 0.0)) throw InputError("box indicator needs lower <= 0 <= upper");
  auto n = std::make_shared<Node>();
  n->kind = FunctionalKind::box_indicator;
  n->lower = lower;
  n->upper = upper;
  return Functional(std::move(g), std::move(n));
}

Functional Functional::positive_part_p_energy(GraphPtr g, double p) {
  require_exponent(p, "positive_part_p_energy");
  auto n = std::make_shared<Node>();
  n->kind = FunctionalKind::positive_part_p_energy;
  n->p = p;
  return Functional(std::move(g), std::move(n));
}

Functional Functional::lalpha_perturbation(const Functional& base, double alpha) {
  if (!(alpha >= 2.0) || !std::isfinite(alpha)) throw InputError("lalpha_perturbation needs alpha >= 2");
  auto n = std::make_shared<Node>();
  n->kind = FunctionalKind::lalpha_perturbation;
  n->alpha = alpha;
  n->children.push_back(base.node_);
  return Functional(base.graph_, std::move(n));
}

Functional Functional::scaled(const Functional& base, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw InputError("scale factor must be > 0");
  auto n = std::make_shared<Node>();
  n->kind = FunctionalKind::scaled;
  n->factor = factor;
  n->children.push_back(base.node_);
  return Functional(base.graph_, std::move(n));
}

Functional Functional::sum(const std::vector<Functional>& terms) {
  if (terms.empty()) throw InputError("sum needs at least one term");
  auto n = std::make_shared<Node>();
  n->kind = FunctionalKind::sum;
  for (const auto& t : terms) {
    if (t.graph_.get() != terms.front().graph_.get()) throw InputError("sum terms live on different graphs");
    n->children.push_back(t.node_);
  }
  return Functional(terms.front().graph_, std::move(n));
}

ExtReal Functional::operator()(std::span<const double> x) const {
  require_same_size(*graph_, x);
  return evaluate(*node_, *graph_, x);
}

void Functional::add_subgradient(std::span<const double> x, std::span<double> out, double factor) const {
  require_same_size(*graph_, x);
  require_same_size(*graph_, out);
  subgradient(*node_, *graph_, x, out, factor);
}

std::vector<Functional::L1Term> Functional::l1_terms() const {
  std::vector<L1Term> terms;
  SmoothAcc acc;
  acc.skip_l1 = true;
  acc.l1 = &terms;
  std::vector<double> x(graph_->node_count(), 0.0), out(x.size(), 0.0);
  smoothed_term(*node_, *graph_, x, 1.0, out, 1.0, acc);
  return terms;
}

ExtReal Functional::smooth_part(std::span<const double> x, std::span<double> out, double factor) const {
  require_same_size(*graph_, x);
  require_same_size(*graph_, out);
  SmoothAcc acc;
  acc.skip_l1 = true;
  smoothed_term(*node_, *graph_, x, 1.0, out, factor, acc);
  if (acc.infinite) return ExtReal::infinity();
  return ExtReal(acc.smoothed);
}

Functional::Smoothed Functional::smoothed(std::span<const double> x, double mu, std::span<double> out,
                                          double factor) const {
  require_same_size(*graph_, x);
  require_same_size(*graph_, out);
  if (!(mu > 0.0)) throw InputError("smoothing parameter must be positive");
  SmoothAcc acc;
  smoothed_term(*node_, *graph_, x, mu, out, factor, acc);
  if (acc.infinite) return {ExtReal::infinity(), ExtReal::infinity()};
  return {acc.smoothed, acc.model};
}

DomainConstraints Functional::domain() const {
  DomainConstraints dc(graph_->node_count());
  collect_domain(*node_, *graph_, dc);
  return dc;
}

FunctionalKind Functional::kind() const { return node_->kind; }
bool Functional::is_symmetric() const { return symmetric(*node_); }
bool Functional::is_quasilinear() const { return quasilinear(*node_); }
bool Functional::is_smooth() const { return smooth(*node_); }
bool Functional::has_energy_part() const { return energy_part(*node_); }

std::string Functional::describe() const {
  std::ostringstream os;
  nldf::describe(*node_, os);
  return os.str();
}

double Functional::exponent() const { return node_->p; }
double Functional::bound() const { return node_->bound; }
double Functional::lower() const { return node_->lower; }
double Functional::upper() const { return node_->upper; }
double Functional::alpha() const { return node_->alpha; }
double Functional::factor() const { return node_->factor; }
std::span<const double> Functional::exponents() const { return node_->exponents; }

std::vector<Functional> Functional::children() const {
  std::vector<Functional> out;
  for (const auto& c : node_->children) out.push_back(Functional(graph_, c));
  return out;
}

ExtReal eval(const Functional& e, const FunctionVector& u) { return e(u.values()); }
bool is_symmetric(const Functional& e) { return e.is_symmetric(); }
bool is_quasilinear(const Functional& e) { return e.is_quasilinear(); }

}  // namespace nldf
