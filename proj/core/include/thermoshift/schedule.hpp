#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "thermoshift/numeric.hpp"

namespace thermoshift {

/// Invalid inverse-temperature schedule (non-increasing betas, alpha not
/// below beta_1, unknown rule, ...).
class ScheduleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Closed-form rule for an infinite strictly increasing beta sequence.
///   Geometric:        beta_j = scale * ratio^j
///   Affine:           beta_j = offset + slope * j
///   HarmonicToLimit:  beta_j = limit - width / j
struct BetaRule {
  enum class Kind { Geometric, Affine, HarmonicToLimit };
  Kind kind = Kind::Geometric;
  Rational first = 1;   // scale | offset | limit
  Rational second = 2;  // ratio | slope  | width

  [[nodiscard]] Rational beta(unsigned j) const;
  [[nodiscard]] std::optional<Rational> limit() const;
  /// Tail sum sum_{j>=n} 1/(2^{j+1} beta_j) when it has a rational closed form.
  [[nodiscard]] std::optional<Rational> closed_form_tail(unsigned n) const;
};

std::string to_string(BetaRule::Kind kind);

enum class Arithmetic { Rational, Interval };

struct FiniteBetas {
  std::vector<Rational> betas;
  Rational c1 = Rational(-1, 6);
};

struct InfiniteBetas {
  BetaRule rule;
};

class TransitionSchedule {
 public:
  /// Validates: alpha > 0, beta_1 > alpha, betas strictly increasing.
  TransitionSchedule(Rational alpha, std::variant<FiniteBetas, InfiniteBetas> mode, Arithmetic arithmetic);

  static TransitionSchedule finite(Rational alpha, std::vector<Rational> betas, Rational c1 = Rational(-1, 6));
  static TransitionSchedule infinite(Rational alpha, BetaRule rule);

  [[nodiscard]] const Rational& alpha() const { return alpha_; }
  [[nodiscard]] bool is_finite() const { return std::holds_alternative<FiniteBetas>(mode_); }
  [[nodiscard]] const FiniteBetas& finite_mode() const { return std::get<FiniteBetas>(mode_); }
  [[nodiscard]] const InfiniteBetas& infinite_mode() const { return std::get<InfiniteBetas>(mode_); }
  [[nodiscard]] Arithmetic arithmetic() const { return arithmetic_; }
  /// True when every coefficient has an exact rational value.
  [[nodiscard]] bool exact() const { return arithmetic_ == Arithmetic::Rational; }

  /// Number of transitions N in finite mode; nullopt when infinite.
  [[nodiscard]] std::optional<unsigned> transition_count() const;
  /// Index of the last coefficient: N+1 in finite mode, nullopt when infinite.
  [[nodiscard]] std::optional<unsigned> top_index() const;
  /// beta_n for 1 <= n (<= N in finite mode).
  [[nodiscard]] Rational beta(unsigned n) const;
  /// beta_infinity; nullopt in finite mode or for unbounded rules.
  [[nodiscard]] std::optional<Rational> beta_limit() const;

 private:
  Rational alpha_;
  std::variant<FiniteBetas, InfiniteBetas> mode_;
  Arithmetic arithmetic_;
};

/// Parses the schedule part of a JSON configuration document:
///   {"alpha": 1, "mode": "finite", "betas": [2, 4], "c1": "-1/6"}
///   {"alpha": 1, "mode": "infinite", "beta_rule": {"kind": "geometric", "scale": 1, "ratio": 2}}
/// Numbers may be JSON numbers or strings such as "1/3" or "0.1" (read exactly).
TransitionSchedule parse_schedule_json(const std::string& json_text);
std::string schedule_to_json(const TransitionSchedule& schedule);

}  // namespace thermoshift
