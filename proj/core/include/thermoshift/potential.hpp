#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "thermoshift/numeric.hpp"
#include "thermoshift/schedule.hpp"
#include "thermoshift/symbolic.hpp"

namespace thermoshift {

inline constexpr double kDefaultTailTolerance = 0x1p-40;

/// Coefficients c_n, their limit and the entropies h_n = 2^{-n} of one
/// schedule, indexed from 1.
///
/// Finite schedules always hold c_1..c_{N+1} exactly. Infinite schedules
/// hold c_1..c_{n_max}; the closed-form geometric rule is exact, other
/// rules carry enclosures of width at most the tail tolerance.
class CoefficientTable {
 public:
  static CoefficientTable build(const TransitionSchedule& schedule, unsigned n_max,
                                double tol = kDefaultTailTolerance);

  [[nodiscard]] unsigned size() const { return static_cast<unsigned>(c_.size()); }
  [[nodiscard]] const Quantity& c(unsigned n) const;
  /// lim c_n: 0 for infinite schedules, c_{N+1} for finite ones.
  [[nodiscard]] const Quantity& limit() const { return limit_; }
  [[nodiscard]] static Rational entropy(unsigned n) { return pow2(-static_cast<long>(n)); }
  [[nodiscard]] bool finite() const { return finite_; }

  /// Copy with c_n shifted by `offset`; the only way to build a table that
  /// breaks the coefficient identities, for exercising the verifier.
  [[nodiscard]] CoefficientTable with_offset(unsigned n, const Rational& offset) const;

 private:
  CoefficientTable(std::vector<Quantity> c, Quantity limit, bool finite)
      : c_(std::move(c)), limit_(std::move(limit)), finite_(finite) {}

  std::vector<Quantity> c_;
  Quantity limit_;
  bool finite_;
};

/// c_n for one index. Exact for finite and geometric schedules; otherwise a
/// partial sum plus a tail enclosure of width <= tol.
Quantity coefficient(const TransitionSchedule& schedule, unsigned n, double tol = kDefaultTailTolerance);
Interval coefficient_c(const TransitionSchedule& schedule, unsigned n, double tol = kDefaultTailTolerance);

/// (10 + 3 log2 j) / (alpha j).
double delta(std::size_t j, double alpha);
Interval delta_enclosure(std::size_t j, const Rational& alpha);

struct ScheduleViolation {
  int item = 0;        // 1 kink identity, 2 dominance, 3 limit bound
  unsigned n = 0;      // interval index (item 1, 3) or predicted maximizer (item 2)
  unsigned k = 0;      // competing index for item 2, 0 otherwise
  std::string beta;    // exact rational text
  std::string detail;
};

struct ScheduleReport {
  bool exact = true;
  unsigned n_max = 0;
  std::size_t checks = 0;
  std::vector<ScheduleViolation> violations;

  [[nodiscard]] bool passed() const { return violations.empty(); }
  [[nodiscard]] std::string to_json() const;
  static ScheduleReport from_json(const std::string& text);
};

/// Checks the three coefficient properties on indices up to `n_max` and on
/// every grid point:
///  1. h_n + beta_n c_n == h_{n+1} + beta_n c_{n+1};
///  2. for beta in [beta_n, beta_{n+1}] (or [0, beta_1]) the line of the
///     predicted maximizer dominates every k <= n_max, strictly off the two
///     lines meeting there;
///  3. beta c <= h_n + beta c_n for beta <= beta_n.
ScheduleReport verify_schedule(const TransitionSchedule& schedule, unsigned n_max,
                               std::span<const Rational> beta_grid);
ScheduleReport verify_schedule(const TransitionSchedule& schedule, const CoefficientTable& table,
                               unsigned n_max, std::span<const Rational> beta_grid);

/// Enclosure of phi_n over the cylinder of `window`.
Interval phi_component_bounds(const CenteredWindow& window, SubshiftIndex n, const CoefficientTable& table,
                              const Rational& alpha);

/// Evaluates phi = sup_n phi_n on cylinders for one schedule. Immutable
/// after construction; safe to share between threads.
class PotentialEvaluator {
 public:
  explicit PotentialEvaluator(const TransitionSchedule& schedule, double tol = kDefaultTailTolerance);

  [[nodiscard]] const TransitionSchedule& schedule() const { return schedule_; }
  [[nodiscard]] const CoefficientTable& table() const { return table_; }

  [[nodiscard]] Interval component(const CenteredWindow& window, SubshiftIndex n) const;
  [[nodiscard]] Interval phi(const CenteredWindow& window) const;
  [[nodiscard]] Interval delta(std::size_t j) const;

 private:
  TransitionSchedule schedule_;
  CoefficientTable table_;
  std::vector<Interval> delta_;
};

Interval phi_bounds(const CenteredWindow& window, const TransitionSchedule& schedule,
                    double tol = kDefaultTailTolerance);

}  // namespace thermoshift
