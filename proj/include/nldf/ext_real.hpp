#pragma once

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace nldf {

// Raised for malformed user input: dimension mismatches, bad parameters,
// schema violations. Solver trouble is reported through diagnostics instead.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A value in [0, +inf]. Arithmetic saturates at +inf and 0 * inf = 0.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  constexpr ExtReal(double v) : v_(v) {}  // NOLINT(implicit)

  static constexpr ExtReal infinity() { return ExtReal(std::numeric_limits<double>::infinity()); }

  constexpr bool finite() const { return v_ < std::numeric_limits<double>::infinity(); }
  constexpr bool infinite() const { return !finite(); }
  constexpr double value() const { return v_; }

  ExtReal scaled(double s) const {
    if (s == 0.0) return ExtReal(0.0);
    return ExtReal(v_ * s);
  }

  friend ExtReal operator+(ExtReal a, ExtReal b) { return ExtReal(a.v_ + b.v_); }
  ExtReal& operator+=(ExtReal b) {
    v_ += b.v_;
    return *this;
  }
  friend bool operator<(ExtReal a, ExtReal b) { return a.v_ < b.v_; }
  friend bool operator<=(ExtReal a, ExtReal b) { return a.v_ <= b.v_; }
  friend bool operator>(ExtReal a, ExtReal b) { return a.v_ > b.v_; }
  friend bool operator>=(ExtReal a, ExtReal b) { return a.v_ >= b.v_; }
  friend bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }

  friend std::ostream& operator<<(std::ostream& os, ExtReal x) {
    if (x.infinite()) return os << "+inf";
    return os << x.v_;
  }

 private:
  double v_ = 0.0;
};

// Difference a - b of extended reals used for margins. inf - inf is taken as
// +inf (the inequality being checked is vacuous).
inline double margin_of(ExtReal rhs, ExtReal lhs) {
  if (rhs.infinite()) return std::numeric_limits<double>::infinity();
  if (lhs.infinite()) return -std::numeric_limits<double>::infinity();
  return rhs.value() - lhs.value();
}

}  // namespace nldf
