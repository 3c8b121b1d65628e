#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace thermoshift {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses "3", "-1/6", "0.125" or "1e-3" into an exact rational. Decimal
/// input is read as the decimal value it spells, not its binary rounding.
Rational parse_rational(std::string_view text);

/// Exact rational value of a finite double (every double is dyadic).
Rational rational_from_double(double value);

/// 2^exponent as an exact rational; exponent may be negative.
Rational pow2(long exponent);

Rational pow(const Rational& base, unsigned exponent);

/// Nearest double (ties to even is not guaranteed; error below one ulp).
double to_double(const Rational& value);

std::string to_string(const Rational& value);

/// Closed enclosure [lo, hi] over the extended reals.
///
/// Every arithmetic result is widened by one ulp on each side, which covers
/// the at-most-half-ulp error of a round-to-nearest operation. Exact inputs
/// therefore drift by a few ulps through long chains; callers that need
/// equalities use Rational instead.
class Interval {
 public:
  constexpr Interval() = default;
  constexpr explicit Interval(double point) : lo_(point), hi_(point) {}
  Interval(double lo, double hi);

  static Interval enclose(const Rational& value);
  static Interval whole();

  [[nodiscard]] constexpr double lo() const { return lo_; }
  [[nodiscard]] constexpr double hi() const { return hi_; }
  [[nodiscard]] double mid() const;
  [[nodiscard]] double width() const { return hi_ - lo_; }
  [[nodiscard]] bool contains(double x) const { return lo_ <= x && x <= hi_; }
  [[nodiscard]] bool contains(const Interval& other) const {
    return lo_ <= other.lo_ && other.hi_ <= hi_;
  }
  [[nodiscard]] bool intersects(const Interval& other) const {
    return lo_ <= other.hi_ && other.lo_ <= hi_;
  }
  [[nodiscard]] bool is_point() const { return lo_ == hi_; }

  Interval operator-() const { return Interval(-hi_, -lo_); }
  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  friend Interval operator/(const Interval& a, const Interval& b);
  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

/// Pointwise max: encloses max(x, y) for x in a, y in b.
Interval max(const Interval& a, const Interval& b);
/// Convex hull.
Interval hull(const Interval& a, const Interval& b);
Interval log2(const Interval& x);
Interval exp2(const Interval& x);

double next_down(double x);
double next_up(double x);

/// A real number carried exactly when the inputs allow it, and always as an
/// enclosure. Mixed operations drop to the enclosure only.
class Quantity {
 public:
  Quantity(const Rational& exact) : exact_(exact), enclosure_(Interval::enclose(exact)) {}  // NOLINT
  Quantity(const Interval& enclosure) : enclosure_(enclosure) {}                           // NOLINT

  [[nodiscard]] bool is_exact() const { return exact_.has_value(); }
  [[nodiscard]] const std::optional<Rational>& exact() const { return exact_; }
  [[nodiscard]] const Interval& enclosure() const { return enclosure_; }
  /// Nearest double for exact values, interval midpoint otherwise.
  [[nodiscard]] double approx() const { return exact_ ? to_double(*exact_) : enclosure_.mid(); }

  friend Quantity operator+(const Quantity& a, const Quantity& b);
  friend Quantity operator-(const Quantity& a, const Quantity& b);
  friend Quantity operator*(const Quantity& a, const Quantity& b);
  Quantity operator-() const;

 private:
  std::optional<Rational> exact_;
  Interval enclosure_;
};

/// Three-way outcome of comparing quantities: exact when both are exact,
/// otherwise decided on the enclosures with a relative slack.
enum class Comparison { Less, Equal, Greater, Undecided };
Comparison compare(const Quantity& a, const Quantity& b, double relative_slack = 1e-12);

std::string describe(const Quantity& q);

}  // namespace thermoshift
