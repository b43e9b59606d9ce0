#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nldf/constraints.hpp"
#include "nldf/ext_real.hpp"
#include "nldf/graph.hpp"

namespace nldf {

enum class FunctionalKind {
  p_energy,
  px_energy,
  lipschitz_indicator,
  linf_ball_indicator,
  box_indicator,
  positive_part_p_energy,
  lalpha_perturbation,
  scaled,
  sum,
};

std::string to_string(FunctionalKind k);

/// Absolute slack on constraint violation before an indicator reports +inf.
inline constexpr double indicator_tolerance = 1e-12;

/// A convex, lower semicontinuous functional E : L^2(X, m) -> [0, inf] with
/// E(0) = 0, drawn from a fixed catalog and closed under scaling and sums.
///
/// Edge terms use the canonical orientation `a < b`, so
/// `positive_part_p_energy` charges (u(a) - u(b))_+ only. The Lipschitz
/// indicator reads the edge weight as a reciprocal edge length: its slope on
/// edge e is `w_e |u(a) - u(b)|`.
class Functional {
 public:
  struct Node;

  // (1/p) sum_e w_e |u(a) - u(b)|^p
  static Functional p_energy(GraphPtr g, double p);
  // sum_e (1/p_e) w_e |u(a) - u(b)|^{p_e}; one exponent per canonical edge
  static Functional px_energy(GraphPtr g, std::vector<double> exponents);
  // 0 if w_e |u(a) - u(b)| <= L on every edge, +inf otherwise
  static Functional lipschitz_indicator(GraphPtr g, double slope_bound);
  // 0 if |u(i)| <= c at every node
  static Functional linf_ball_indicator(GraphPtr g, double c);
  // 0 if lower <= u(i) <= upper at every node; lower <= 0 <= upper
  static Functional box_indicator(GraphPtr g, double lower, double upper);
  // sum_e w_e ((u(a) - u(b))_+)^p
  static Functional positive_part_p_energy(GraphPtr g, double p);
  // base(u) + sum_i m(i) |u(i)|^alpha
  static Functional lalpha_perturbation(const Functional& base, double alpha);
  static Functional scaled(const Functional& base, double factor);
  static Functional sum(const std::vector<Functional>& terms);

  ExtReal operator()(std::span<const double> x) const;
  ExtReal operator()(const FunctionVector& x) const { return (*this)(x.values()); }

  /// out += factor * s for some s in the subdifferential of the finite part
  /// at x. Indicator terms contribute the zero normal vector.
  void add_subgradient(std::span<const double> x, std::span<double> out, double factor = 1.0) const;

  /// Huber smoothing of the exponent-1 edge terms with parameter mu; other
  /// terms are exact. Adds factor * grad E_mu(x) to out and returns E_mu(x)
  /// together with the model value M(x): the model is affine in the
  /// exponent-1 terms, with the returned gradient as slope, and lies below E
  /// everywhere, so E(y) >= M(x) + <grad, y - x> for every y.
  struct Smoothed {
    ExtReal smoothed;
    ExtReal model;
  };
  Smoothed smoothed(std::span<const double> x, double mu, std::span<double> out, double factor = 1.0) const;

  /// The exponent-1 edge terms with every enclosing factor applied:
  /// weight |x_a - x_b|, or weight (x_a - x_b)_+ when one_sided.
  struct L1Term {
    std::size_t a = 0, b = 0;
    double weight = 0.0;
    bool one_sided = false;
  };
  std::vector<L1Term> l1_terms() const;
  /// E without its exponent-1 edge terms (differentiable); adds
  /// factor * gradient to out.
  ExtReal smooth_part(std::span<const double> x, std::span<double> out, double factor = 1.0) const;

  /// Effective domain.
  DomainConstraints domain() const;

  FunctionalKind kind() const;
  bool is_symmetric() const;
  bool is_quasilinear() const;
  /// Finite part is differentiable everywhere (no p = 1 terms).
  bool is_smooth() const;
  /// True if some term contributes a finite, not identically zero energy.
  bool has_energy_part() const;

  const MeasuredGraph& graph() const { return *graph_; }
  const GraphPtr& graph_ptr() const { return graph_; }
  const Node& node() const { return *node_; }
  std::string describe() const;

  /// Catalog parameters; meaningful according to kind().
  double exponent() const;
  double bound() const;
  double lower() const;
  double upper() const;
  double alpha() const;
  double factor() const;
  std::span<const double> exponents() const;
  std::vector<Functional> children() const;

 private:
  Functional(GraphPtr g, std::shared_ptr<const Node> n) : graph_(std::move(g)), node_(std::move(n)) {}
  GraphPtr graph_;
  std::shared_ptr<const Node> node_;
};

struct Functional::Node {
  FunctionalKind kind = FunctionalKind::p_energy;
  double p = 2.0;
  double bound = 1.0;
  double lower = 0.0;
  double upper = 1.0;
  double alpha = 2.0;
  double factor = 1.0;
  std::vector<double> exponents;
  std::vector<std::shared_ptr<const Node>> children;
};

/// E(x) evaluated as an ExtReal; throws InputError on dimension mismatch.
ExtReal eval(const Functional& e, const FunctionVector& u);
bool is_symmetric(const Functional& e);
bool is_quasilinear(const Functional& e);

}  // namespace nldf
