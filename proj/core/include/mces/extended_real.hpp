#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>

namespace mces {

/// A real number or +infinity. Comparison envelopes and regret budgets use
/// this so that "no comparison possible" is a value of its own rather than a
/// float that happens to be large.
class ExtendedReal {
 public:
  struct Infinity {
    friend constexpr bool operator==(Infinity, Infinity) { return true; }
  };

  ExtendedReal(double value) : value_(value) {  // NOLINT(google-explicit-constructor)
    if (!std::isfinite(value)) {
      throw std::invalid_argument("ExtendedReal requires a finite value; use infinity()");
    }
  }

  static ExtendedReal infinity() { return ExtendedReal(Infinity{}); }

  // Maps IEEE +inf onto the infinite alternative. NaN and -inf are rejected.
  static ExtendedReal from_double(double value) {
    if (value == std::numeric_limits<double>::infinity()) return infinity();
    return ExtendedReal(value);
  }

  bool is_infinite() const { return std::holds_alternative<Infinity>(value_); }
  bool is_finite() const { return !is_infinite(); }

  double value() const {
    if (is_infinite()) throw std::logic_error("value() called on +infinity");
    return std::get<double>(value_);
  }

  double to_double() const {
    return is_infinite() ? std::numeric_limits<double>::infinity() : std::get<double>(value_);
  }

  std::string to_string() const;

  friend ExtendedReal operator+(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    return ExtendedReal(a.value() + b.value());
  }

  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) { return a.value_ == b.value_; }

  friend std::partial_ordering operator<=>(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.is_infinite() && b.is_infinite()) return std::partial_ordering::equivalent;
    if (a.is_infinite()) return std::partial_ordering::greater;
    if (b.is_infinite()) return std::partial_ordering::less;
    return a.value() <=> b.value();
  }

 private:
  explicit ExtendedReal(Infinity) : value_(Infinity{}) {}

  std::variant<double, Infinity> value_;
};

// lhs > base + margin, false whenever the margin is infinite.
inline bool exceeds_by(double lhs, double base, const ExtendedReal& margin) {
  if (margin.is_infinite()) return false;
  return lhs > base + margin.value();
}

inline std::string ExtendedReal::to_string() const {
  return is_infinite() ? std::string("inf") : std::to_string(std::get<double>(value_));
}

}  // namespace mces
