#include "thermoshift/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <stdexcept>

namespace thermoshift {

namespace {

BigInt parse_digits(std::string_view digits) {
  BigInt out = 0;
  for (char ch : digits) {
    out *= 10;
    out += ch - '0';
  }
  return out;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

Rational parse_decimal(std::string_view text) {
  const std::string original(text);
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = text.substr(e + 1);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (!all_digits(exp_part) || exp_part.size() > 6) {
      throw std::invalid_argument("malformed number: " + original);
    }
    exponent = std::stol(std::string(exp_part));
    if (exp_negative) exponent = -exponent;
    text = text.substr(0, e);
  }
  std::string_view int_part = text;
  std::string_view frac_part;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    int_part = text.substr(0, dot);
    frac_part = text.substr(dot + 1);
  }
  if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
      (!frac_part.empty() && !all_digits(frac_part))) {
    throw std::invalid_argument("malformed number: " + original);
  }
  BigInt mantissa = parse_digits(std::string(int_part) + std::string(frac_part));
  exponent -= static_cast<long>(frac_part.size());
  Rational value(mantissa);
  BigInt ten_power = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::labs(exponent)));
  value = exponent >= 0 ? value * Rational(ten_power) : value / Rational(ten_power);
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_decimal(text.substr(0, slash));
    Rational den = parse_decimal(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
    return num / den;
  }
  return parse_decimal(text);
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite value has no rational form");
  if (value == 0.0) return Rational(0);
  int exp = 0;
  double frac = std::frexp(value, &exp);  // value = frac * 2^exp, |frac| in [0.5, 1)
  auto mant = static_cast<std::int64_t>(std::ldexp(frac, 53));
  return Rational(BigInt(mant)) * pow2(exp - 53);
}

Rational pow2(long exponent) {
  BigInt p = BigInt(1) << static_cast<unsigned>(std::labs(exponent));
  return exponent >= 0 ? Rational(p) : Rational(BigInt(1), p);
}

Rational pow(const Rational& base, unsigned exponent) {
  Rational result(1);
  Rational b = base;
  while (exponent != 0) {
    if (exponent & 1U) result *= b;
    b *= b;
    exponent >>= 1U;
  }
  return result;
}

double to_double(const Rational& value) {
  if (value == 0) return 0.0;
  BigInt num = boost::multiprecision::numerator(value);
  BigInt den = boost::multiprecision::denominator(value);
  const bool negative = num < 0;
  if (negative) num = -num;
  // Scale so the integer quotient carries 64 significant bits.
  long shift = static_cast<long>(boost::multiprecision::msb(den)) -
               static_cast<long>(boost::multiprecision::msb(num)) + 64;
  BigInt q = shift >= 0 ? BigInt((num << static_cast<unsigned>(shift)) / den)
                        : BigInt((num >> static_cast<unsigned>(-shift)) / den);
  while (q >= (BigInt(1) << 64U)) {
    q >>= 1U;
    --shift;
  }
  double out = std::ldexp(static_cast<double>(static_cast<std::uint64_t>(q)), static_cast<int>(-shift));
  return negative ? -out : out;
}

std::string to_string(const Rational& value) {
  if (boost::multiprecision::denominator(value) == 1) {
    return boost::multiprecision::numerator(value).str();
  }
  return boost::multiprecision::numerator(value).str() + "/" + boost::multiprecision::denominator(value).str();
}

double next_down(double x) {
  return std::isinf(x) ? x : std::nextafter(x, -std::numeric_limits<double>::infinity());
}
double next_up(double x) {
  return std::isinf(x) ? x : std::nextafter(x, std::numeric_limits<double>::infinity());
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (std::isnan(lo) || std::isnan(hi) || lo > hi) {
    throw std::invalid_argument("interval requires lo <= hi");
  }
}

Interval Interval::enclose(const Rational& value) {
  const double d = to_double(value);
  if (std::isfinite(d) && rational_from_double(d) == value) return Interval(d);
  return Interval(next_down(d), next_up(d));
}

Interval Interval::whole() {
  return Interval(-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity());
}

double Interval::mid() const {
  if (std::isinf(lo_) || std::isinf(hi_)) return lo_ + hi_;
  return lo_ + 0.5 * (hi_ - lo_);
}

namespace {

Interval widened(double lo, double hi) { return Interval(next_down(lo), next_up(hi)); }

// Knuth TwoSum: the rounding error of a + b is recovered exactly.
bool exact_sum(double a, double b, double s) {
  if (!std::isfinite(s)) return false;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return err == 0.0;
}

}  // namespace

Interval operator+(const Interval& a, const Interval& b) {
  const double lo = a.lo_ + b.lo_;
  const double hi = a.hi_ + b.hi_;
  return Interval(exact_sum(a.lo_, b.lo_, lo) ? lo : next_down(lo),
                  exact_sum(a.hi_, b.hi_, hi) ? hi : next_up(hi));
}

Interval operator-(const Interval& a, const Interval& b) { return a + (-b); }

Interval operator*(const Interval& a, const Interval& b) {
  double p[4] = {a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
  // 0 * inf is treated as 0: both factors enclose finite reals.
  for (double& v : p) {
    if (std::isnan(v)) v = 0.0;
  }
  const double lo = std::min({p[0], p[1], p[2], p[3]});
  const double hi = std::max({p[0], p[1], p[2], p[3]});
  if (a.is_point() && b.is_point()) {
    // A product of two doubles is exact iff fma recovers a zero residual.
    if (std::isfinite(lo) && std::fma(a.lo_, b.lo_, -lo) == 0.0) return Interval(lo);
  }
  return widened(lo, hi);
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.lo_ <= 0.0 && b.hi_ >= 0.0) return Interval::whole();
  const double q[4] = {a.lo_ / b.lo_, a.lo_ / b.hi_, a.hi_ / b.lo_, a.hi_ / b.hi_};
  double lo = q[0];
  double hi = q[0];
  for (double v : q) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (a.is_point() && b.is_point() && std::isfinite(lo) && std::fma(lo, b.lo_, -a.lo_) == 0.0) {
    return Interval(lo);
  }
  return widened(lo, hi);
}

Interval max(const Interval& a, const Interval& b) {
  return Interval(std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

Interval hull(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

Interval log2(const Interval& x) {
  if (x.lo() < 0.0) throw std::domain_error("log2 of an interval reaching below zero");
  const double lo = x.lo() == 0.0 ? -std::numeric_limits<double>::infinity() : std::log2(x.lo());
  const double hi = std::log2(x.hi());
  // glibc log2 is exact at powers of two and within one ulp elsewhere.
  auto exact_pow2 = [](double v, double l) { return std::isfinite(l) && l == std::round(l) && std::exp2(l) == v; };
  return Interval(exact_pow2(x.lo(), lo) ? lo : next_down(next_down(lo)),
                  exact_pow2(x.hi(), hi) ? hi : next_up(next_up(hi)));
}

Interval exp2(const Interval& x) {
  auto exact_int = [](double v) { return v == std::round(v) && std::abs(v) < 1000.0; };
  const double lo = std::exp2(x.lo());
  const double hi = std::exp2(x.hi());
  return Interval(exact_int(x.lo()) ? lo : std::max(0.0, next_down(next_down(lo))),
                  exact_int(x.hi()) ? hi : next_up(next_up(hi)));
}

Quantity operator+(const Quantity& a, const Quantity& b) {
  if (a.exact_ && b.exact_) return Quantity(Rational(*a.exact_ + *b.exact_));
  return Quantity(a.enclosure_ + b.enclosure_);
}

Quantity operator-(const Quantity& a, const Quantity& b) { return a + (-b); }

Quantity operator*(const Quantity& a, const Quantity& b) {
  if (a.exact_ && b.exact_) return Quantity(Rational(*a.exact_ * *b.exact_));
  return Quantity(a.enclosure_ * b.enclosure_);
}

Quantity Quantity::operator-() const {
  if (exact_) return Quantity(Rational(-*exact_));
  return Quantity(-enclosure_);
}

Comparison compare(const Quantity& a, const Quantity& b, double relative_slack) {
  if (a.is_exact() && b.is_exact()) {
    if (*a.exact() < *b.exact()) return Comparison::Less;
    if (*a.exact() > *b.exact()) return Comparison::Greater;
    return Comparison::Equal;
  }
  const Interval& x = a.enclosure();
  const Interval& y = b.enclosure();
  if (x.hi() < y.lo()) return Comparison::Less;
  if (x.lo() > y.hi()) return Comparison::Greater;
  const double scale = std::max({1.0, std::abs(x.mid()), std::abs(y.mid())});
  if (x.width() <= relative_slack * scale && y.width() <= relative_slack * scale) return Comparison::Equal;
  return Comparison::Undecided;
}

std::string describe(const Quantity& q) {
  char buf[96];
  if (q.is_exact()) {
    std::snprintf(buf, sizeof buf, " (%.17g)", to_double(*q.exact()));
    return to_string(*q.exact()) + buf;
  }
  std::snprintf(buf, sizeof buf, "[%.17g, %.17g]", q.enclosure().lo(), q.enclosure().hi());
  return buf;
}

}  // namespace thermoshift
