#include "thermoshift/potential.hpp"

#include <algorithm>
#include <stdexcept>

#include "json_util.hpp"

namespace thermoshift {

namespace {

// 1 / (2^{j+1} beta_j)
Rational increment(const TransitionSchedule& schedule, unsigned j) {
  return Rational(1) / (pow2(static_cast<long>(j) + 1) * schedule.beta(j));
}

// Smallest J >= n whose tail bound 1/(2^J beta_J) is at most tol / 2.
unsigned tail_cutoff(const TransitionSchedule& schedule, unsigned n, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tail tolerance must be positive");
  const Rational target = rational_from_double(tol) / 2;
  unsigned J = std::max(n, 1U);
  while (Rational(1) / (pow2(J) * schedule.beta(J)) > target) {
    ++J;
    if (J > 4096) throw ScheduleError("coefficient tail does not converge within 4096 terms");
  }
  return J;
}

Quantity tail_enclosure(const Rational& partial, const TransitionSchedule& schedule, unsigned J) {
  const Rational bound = Rational(1) / (pow2(J) * schedule.beta(J));
  return Quantity(Interval::enclose(Rational(-partial)) + Interval(-Interval::enclose(bound).hi(), 0.0));
}

}  // namespace

CoefficientTable CoefficientTable::build(const TransitionSchedule& schedule, unsigned n_max, double tol) {
  std::vector<Quantity> c;
  if (schedule.is_finite()) {
    const unsigned top = *schedule.top_index();
    Rational value = schedule.finite_mode().c1;
    c.emplace_back(value);
    for (unsigned n = 1; n < top; ++n) {
      value += increment(schedule, n);
      c.emplace_back(value);
    }
    Quantity limit = c.back();
    return CoefficientTable(std::move(c), std::move(limit), true);
  }
  if (n_max < 1) throw std::invalid_argument("coefficient table needs n_max >= 1");
  const BetaRule& rule = schedule.infinite_mode().rule;
  if (rule.closed_form_tail(1)) {
    for (unsigned n = 1; n <= n_max; ++n) c.emplace_back(Rational(-*rule.closed_form_tail(n)));
  } else {
    const unsigned J = tail_cutoff(schedule, n_max, tol);
    std::vector<Rational> partial(J + 1, Rational(0));
    for (unsigned n = J; n-- > 1;) partial[n] = partial[n + 1] + increment(schedule, n);
    for (unsigned n = 1; n <= n_max; ++n) c.push_back(tail_enclosure(partial[n], schedule, J));
  }
  return CoefficientTable(std::move(c), Quantity(Rational(0)), false);
}

const Quantity& CoefficientTable::c(unsigned n) const {
  if (n < 1 || n > c_.size()) {
    throw std::out_of_range("coefficient index " + std::to_string(n) + " outside table of size " +
                            std::to_string(c_.size()));
  }
  return c_[n - 1];
}

CoefficientTable CoefficientTable::with_offset(unsigned n, const Rational& offset) const {
  CoefficientTable copy = *this;
  Quantity& slot = copy.c_.at(n - 1);
  slot = slot + Quantity(offset);
  if (finite_ && n == c_.size()) copy.limit_ = slot;
  return copy;
}

Quantity coefficient(const TransitionSchedule& schedule, unsigned n, double tol) {
  if (n < 1) throw std::invalid_argument("coefficient index starts at 1");
  if (schedule.is_finite()) {
    if (n > *schedule.top_index()) throw std::out_of_range("finite schedule has no coefficient beyond N+1");
    Rational value = schedule.finite_mode().c1;
    for (unsigned j = 1; j < n; ++j) value += increment(schedule, j);
    return Quantity(value);
  }
  const BetaRule& rule = schedule.infinite_mode().rule;
  if (auto tail = rule.closed_form_tail(n)) return Quantity(Rational(-*tail));
  const unsigned J = tail_cutoff(schedule, n, tol);
  Rational partial = 0;
  for (unsigned j = n; j < J; ++j) partial += increment(schedule, j);
  return tail_enclosure(partial, schedule, J);
}

Interval coefficient_c(const TransitionSchedule& schedule, unsigned n, double tol) {
  return coefficient(schedule, n, tol).enclosure();
}

double delta(std::size_t j, double alpha) {
  if (j < 1) throw std::invalid_argument("delta index starts at 1");
  const double jd = static_cast<double>(j);
  return (10.0 + 3.0 * std::log2(jd)) / (alpha * jd);
}

Interval delta_enclosure(std::size_t j, const Rational& alpha) {
  if (j < 1) throw std::invalid_argument("delta index starts at 1");
  const Interval jj(static_cast<double>(j));
  return (Interval(10.0) + Interval(3.0) * log2(jj)) / (Interval::enclose(alpha) * jj);
}

// ---------------------------------------------------------------------------
// verify_schedule

namespace {

bool possibly_le(const Quantity& a, const Quantity& b) {
  if (a.is_exact() && b.is_exact()) return *a.exact() <= *b.exact();
  return a.enclosure().lo() <= b.enclosure().hi();
}

bool certainly_lt(const Quantity& a, const Quantity& b) {
  if (a.is_exact() && b.is_exact()) return *a.exact() < *b.exact();
  return a.enclosure().hi() < b.enclosure().lo();
}

bool possibly_eq(const Quantity& a, const Quantity& b) {
  if (a.is_exact() && b.is_exact()) return *a.exact() == *b.exact();
  return a.enclosure().intersects(b.enclosure());
}

}  // namespace

ScheduleReport verify_schedule(const TransitionSchedule& schedule, unsigned n_max,
                               std::span<const Rational> beta_grid) {
  unsigned size = n_max;
  if (!schedule.is_finite()) {
    // Item 2 may need the maximizer line beyond n_max.
    for (const Rational& beta : beta_grid) {
      if (schedule.beta_limit() && beta >= *schedule.beta_limit()) continue;
      unsigned m = 1;
      while (schedule.beta(m) < beta) ++m;
      size = std::max(size, m + 1);
    }
  }
  return verify_schedule(schedule, CoefficientTable::build(schedule, size), n_max, beta_grid);
}

ScheduleReport verify_schedule(const TransitionSchedule& schedule, const CoefficientTable& table,
                               unsigned n_max, std::span<const Rational> beta_grid) {
  if (n_max < 2) throw std::invalid_argument("verify_schedule needs n_max >= 2");
  ScheduleReport report;
  report.n_max = n_max;
  const unsigned top = schedule.is_finite() ? std::min(n_max, *schedule.top_index()) : n_max;
  const unsigned kinks = top - 1;
  const unsigned with_beta = schedule.is_finite() ? std::min(top, *schedule.transition_count()) : top;

  auto line = [&](unsigned k, const Rational& beta) {
    return Quantity(CoefficientTable::entropy(k)) + Quantity(beta) * table.c(k);
  };
  auto note = [&](const Quantity& q) { report.exact = report.exact && q.is_exact(); };

  for (unsigned n = 1; n <= kinks; ++n) {
    const Rational beta = schedule.beta(n);
    const Quantity left = line(n, beta);
    const Quantity right = line(n + 1, beta);
    note(left);
    note(right);
    ++report.checks;
    if (!possibly_eq(left, right)) {
      report.violations.push_back({1, n, n + 1, to_string(beta),
                                   "h_n + beta_n c_n = " + describe(left) + " but h_{n+1} + beta_n c_{n+1} = " +
                                       describe(right)});
    }
  }

  const std::optional<Rational> beta_limit = schedule.beta_limit();
  for (const Rational& beta : beta_grid) {
    if (beta < 0) throw std::invalid_argument("beta grid points must be >= 0");

    if (beta_limit && beta >= *beta_limit) {
      // Past the accumulation point the fixed points (value beta * c = 0) win.
      const Quantity zero(Rational(0));
      for (unsigned k = 1; k <= top; ++k) {
        const Quantity v = line(k, beta);
        note(v);
        ++report.checks;
        if (!certainly_lt(v, zero)) {
          report.violations.push_back({2, 0, k, to_string(beta), "line " + std::to_string(k) + " = " + describe(v) +
                                                                     " is not below the fixed-point value 0"});
        }
      }
    } else {
      // Predicted maximizer m: beta in (beta_{m-1}, beta_m], with beta_0 = 0.
      unsigned m = 1;
      const unsigned last = schedule.is_finite() ? *schedule.transition_count() : ~0U;
      while (m <= last && schedule.beta(m) < beta) ++m;
      const bool at_kink = m <= last && schedule.beta(m) == beta;
      if (m <= table.size()) {
        const Quantity best = line(m, beta);
        note(best);
        for (unsigned k = 1; k <= top; ++k) {
          if (k == m) continue;
          const Quantity v = line(k, beta);
          note(v);
          ++report.checks;
          const bool tie_allowed = at_kink && k == m + 1;
          const bool ok = tie_allowed ? possibly_le(v, best) && possibly_eq(v, best) : certainly_lt(v, best);
          if (!ok) {
            report.violations.push_back(
                {2, m, k, to_string(beta),
                 "line " + std::to_string(k) + " = " + describe(v) + " vs maximizer line " + std::to_string(m) +
                     " = " + describe(best) + (tie_allowed ? " (tie expected)" : " (strict dominance expected)")});
          }
        }
      }
    }

    for (unsigned n = 1; n <= with_beta; ++n) {
      if (beta > schedule.beta(n)) continue;
      const Quantity lhs = Quantity(beta) * table.limit();
      const Quantity rhs = line(n, beta);
      note(rhs);
      ++report.checks;
      if (!possibly_le(lhs, rhs)) {
        report.violations.push_back({3, n, 0, to_string(beta),
                                     "beta c = " + describe(lhs) + " exceeds h_n + beta c_n = " + describe(rhs)});
      }
    }
  }
  return report;
}

std::string ScheduleReport::to_json() const {
  detail::json doc;
  doc["passed"] = passed();
  doc["exact"] = exact;
  doc["n_max"] = n_max;
  doc["checks"] = checks;
  auto& list = doc["violations"] = detail::json::array();
  for (const auto& v : violations) {
    list.push_back({{"item", v.item}, {"n", v.n}, {"k", v.k}, {"beta", v.beta}, {"detail", v.detail}});
  }
  return doc.dump(2);
}

ScheduleReport ScheduleReport::from_json(const std::string& text) {
  const detail::json doc = detail::json::parse(text);
  ScheduleReport report;
  report.exact = doc.at("exact").get<bool>();
  report.n_max = doc.at("n_max").get<unsigned>();
  report.checks = doc.at("checks").get<std::size_t>();
  for (const auto& v : doc.at("violations")) {
    report.violations.push_back({v.at("item").get<int>(), v.at("n").get<unsigned>(), v.at("k").get<unsigned>(),
                                 v.at("beta").get<std::string>(), v.at("detail").get<std::string>()});
  }
  return report;
}

// ---------------------------------------------------------------------------
// phi

namespace {

Interval component_from_exponent(const Interval& c, const DistanceExponent& e, const Interval& d) {
  if (e.is_exact()) return c - d;
  return Interval((c - d).lo(), c.hi());
}

}  // namespace

Interval phi_component_bounds(const CenteredWindow& window, SubshiftIndex n, const CoefficientTable& table,
                              const Rational& alpha) {
  const DistanceExponent e = distance_exponent(window, n);
  return component_from_exponent(table.c(n.value()).enclosure(), e, delta_enclosure(e.value, alpha));
}

PotentialEvaluator::PotentialEvaluator(const TransitionSchedule& schedule, double tol)
    : schedule_(schedule), table_(CoefficientTable::build(schedule, kMaxSubshiftIndex, tol)) {
  delta_.reserve(1024);
  for (std::size_t j = 1; j <= 1024; ++j) delta_.push_back(delta_enclosure(j, schedule.alpha()));
}

Interval PotentialEvaluator::delta(std::size_t j) const {
  if (j >= 1 && j <= delta_.size()) return delta_[j - 1];
  return delta_enclosure(j, schedule_.alpha());
}

Interval PotentialEvaluator::component(const CenteredWindow& window, SubshiftIndex n) const {
  const DistanceExponent e = distance_exponent(window, n);
  return component_from_exponent(table_.c(n.value()).enclosure(), e, delta(e.value));
}

Interval PotentialEvaluator::phi(const CenteredWindow& window) const {
  if (table_.finite()) {
    Interval best = component(window, SubshiftIndex(1));
    for (unsigned n = 2; n <= table_.size(); ++n) best = max(best, component(window, SubshiftIndex(n)));
    return best;
  }
  const std::size_t radius = window.symmetric_radius();
  const unsigned stable = stabilization_index(2 * radius + 1);
  if (stable > table_.size()) throw SizeLimitError("window too long for the coefficient table");
  Interval best = Interval(-std::numeric_limits<double>::infinity());
  DistanceExponent e = DistanceExponent::at_least(0);
  for (unsigned n = 1; n <= stable; ++n) {
    e = distance_exponent(window, SubshiftIndex(n));
    best = max(best, component_from_exponent(table_.c(n).enclosure(), e, delta(e.value)));
  }
  // For n beyond the stabilization index the exponent no longer changes and
  // c_n increases to the limit, so the tail supremum is limit - delta_e.
  const Interval tail = component_from_exponent(table_.limit().enclosure(), e, delta(e.value));
  return max(best, tail);
}

Interval phi_bounds(const CenteredWindow& window, const TransitionSchedule& schedule, double tol) {
  return PotentialEvaluator(schedule, tol).phi(window);
}

}  // namespace thermoshift
