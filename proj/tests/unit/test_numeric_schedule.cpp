#include <doctest.h>

#include <cmath>
#include <random>

#include "thermoshift/config.hpp"
#include "thermoshift/numeric.hpp"
#include "thermoshift/schedule.hpp"

using namespace thermoshift;

TEST_SUITE("numeric") {

TEST_CASE("rational parsing is exact") {
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational("-1/6") == Rational(-1, 6));
  CHECK(parse_rational("0.1") == Rational(1, 10));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational("2.5E2") == 250);
  CHECK_THROWS(parse_rational("abc"));
  CHECK_THROWS(parse_rational("1/0"));
  CHECK(rational_from_double(0.1) != Rational(1, 10));
  CHECK(to_double(rational_from_double(0.1)) == 0.1);
  CHECK(pow2(-3) == Rational(1, 8));
  CHECK(pow(Rational(2, 3), 3) == Rational(8, 27));
  CHECK(to_string(Rational(-1, 6)) == "-1/6");
}

TEST_CASE("interval arithmetic encloses random expressions") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int t = 0; t < 2000; ++t) {
    const double a = u(rng), b = u(rng), c = u(rng);
    const Interval ia(a), ib(b), ic(c);
    const long double exact = static_cast<long double>(a) * b + c;
    const Interval r = ia * ib + ic;
    CHECK(static_cast<long double>(r.lo()) <= exact);
    CHECK(exact <= static_cast<long double>(r.hi()));
    if (b != 0.0) {
      const long double q = static_cast<long double>(a) / b;
      const Interval d = ia / ib;
      CHECK(static_cast<long double>(d.lo()) <= q);
      CHECK(q <= static_cast<long double>(d.hi()));
    }
  }
  const Interval third = Interval::enclose(Rational(1, 3));
  CHECK(third.contains(1.0 / 3.0));
  CHECK(third.lo() < third.hi());
  CHECK(Interval::enclose(Rational(1, 4)).is_point());
  CHECK(log2(Interval(8.0)).contains(3.0));
  CHECK(exp2(Interval(0.5)).contains(std::sqrt(2.0)));
  CHECK(max(Interval(0, 1), Interval(0.5, 2)) == Interval(0.5, 2));
  CHECK(hull(Interval(0, 1), Interval(3, 4)) == Interval(0, 4));
  CHECK_THROWS(Interval(2, 1));
}

TEST_CASE("quantities stay exact when they can") {
  const Quantity a = Rational(1, 3);
  const Quantity b = Rational(1, 6);
  CHECK((a + b).is_exact());
  CHECK(*(a - b).exact() == Rational(1, 6));
  CHECK(*(a * b).exact() == Rational(1, 18));
  CHECK(*(-a).exact() == Rational(-1, 3));
  const Quantity c = Interval(0.1, 0.2);
  CHECK_FALSE((a + c).is_exact());
  CHECK((a + c).enclosure().contains(1.0 / 3.0 + 0.15));
  CHECK(compare(a, b) == Comparison::Greater);
  CHECK(compare(b, b) == Comparison::Equal);
  CHECK(compare(c, Quantity(Rational(1, 2))) == Comparison::Less);
  CHECK(compare(c, Quantity(Interval(0.15, 0.3))) == Comparison::Undecided);
  CHECK(describe(a).find("1/3") != std::string::npos);
}

}  // TEST_SUITE

TEST_SUITE("schedule") {

TEST_CASE("construction validates the ordering") {
  CHECK_NOTHROW(TransitionSchedule::finite(1, {2, 4}));
  CHECK_THROWS_AS(TransitionSchedule::finite(1, {4, 2}), ScheduleError);
  CHECK_THROWS_AS(TransitionSchedule::finite(1, {2, 2}), ScheduleError);
  CHECK_THROWS_AS(TransitionSchedule::finite(2, {2, 4}), ScheduleError);
  CHECK_THROWS_AS(TransitionSchedule::finite(0, {2, 4}), ScheduleError);
  CHECK_THROWS_AS(TransitionSchedule::finite(1, {}), ScheduleError);
  CHECK_THROWS_AS(TransitionSchedule::infinite(1, {BetaRule::Kind::Geometric, 1, 1}), ScheduleError);
  CHECK_THROWS_AS(TransitionSchedule::infinite(2, {BetaRule::Kind::Geometric, 1, 2}), ScheduleError);
  CHECK_THROWS_AS(TransitionSchedule(1, InfiniteBetas{{BetaRule::Kind::HarmonicToLimit, 2, 1}}, Arithmetic::Rational),
                  ScheduleError);
}

TEST_CASE("accessors") {
  const auto fin = TransitionSchedule::finite(1, {2, 4});
  CHECK(*fin.transition_count() == 2);
  CHECK(*fin.top_index() == 3);
  CHECK(fin.beta(2) == 4);
  CHECK_THROWS((void)fin.beta(3));
  CHECK_FALSE(fin.beta_limit());
  const auto harm = TransitionSchedule::infinite(Rational(9, 10), {BetaRule::Kind::HarmonicToLimit, 2, 1});
  CHECK(harm.beta(4) == Rational(7, 4));
  CHECK(*harm.beta_limit() == 2);
  CHECK_FALSE(harm.exact());
  CHECK_FALSE(harm.transition_count());
  const auto geo = TransitionSchedule::infinite(1, {BetaRule::Kind::Geometric, 1, 2});
  CHECK(geo.exact());
  CHECK(geo.beta(5) == 32);
  CHECK_FALSE(geo.beta_limit());
}

TEST_CASE("json round-trip") {
  for (const char* text : {
           R"({"alpha": 1, "mode": "finite", "betas": [2, 4], "c1": "-1/6"})",
           R"({"alpha": "9/10", "mode": "infinite", "beta_rule": {"kind": "harmonic_to_limit", "limit": 2, "width": 1}})",
           R"({"alpha": 0.5, "mode": "infinite", "beta_rule": {"kind": "affine", "offset": 1, "slope": "1/2"}})",
           R"({"alpha": 1, "mode": "infinite", "beta_rule": {"kind": "geometric", "scale": 1, "ratio": 2}})"}) {
    const TransitionSchedule s = parse_schedule_json(text);
    const TransitionSchedule back = parse_schedule_json(schedule_to_json(s));
    CHECK(schedule_to_json(back) == schedule_to_json(s));
    CHECK(back.alpha() == s.alpha());
    CHECK(back.beta(1) == s.beta(1));
  }
  CHECK(parse_schedule_json(R"({"alpha": 0.9, "mode": "finite", "betas": [1.1]})").alpha() == Rational(9, 10));
}

TEST_CASE("json errors") {
  CHECK_THROWS_AS(parse_schedule_json("{"), ScheduleError);
  CHECK_THROWS_AS(parse_schedule_json("[]"), ScheduleError);
  CHECK_THROWS_AS(parse_schedule_json(R"({"mode": "finite", "betas": [2]})"), ScheduleError);
  CHECK_THROWS_AS(parse_schedule_json(R"({"alpha": 1, "mode": "sideways"})"), ScheduleError);
  CHECK_THROWS_AS(parse_schedule_json(R"({"alpha": 1, "mode": "finite", "betas": [4, 2]})"), ScheduleError);
  CHECK_THROWS_AS(parse_schedule_json(R"({"alpha": 1, "mode": "finite", "betas": ["x"]})"), ScheduleError);
  CHECK_THROWS_AS(parse_schedule_json(R"({"alpha": 1, "mode": "infinite", "beta_rule": {"kind": "zeta"}})"),
                  ScheduleError);
  CHECK_THROWS_AS(
      parse_schedule_json(
          R"({"alpha": 0.9, "mode": "infinite", "beta_rule": {"kind": "harmonic_to_limit", "limit": 2, "width": 1}, "beta_limit": 3})"),
      ScheduleError);
}

}  // TEST_SUITE

TEST_SUITE("config") {

TEST_CASE("beta grids") {
  const auto g = make_beta_grid(1, 2, Rational(1, 4));
  REQUIRE(g.size() == 5);
  CHECK(g.back() == 2);
  CHECK(make_beta_grid(1, Rational(19, 10), Rational(1, 4)).size() == 4);
  CHECK(make_beta_grid(parse_rational("1"), parse_rational("6"), parse_rational("0.1")).size() == 51);
  CHECK_THROWS_AS(make_beta_grid(1, 2, 0), ConfigError);
  CHECK_THROWS_AS(make_beta_grid(2, 1, 1), ConfigError);
  CHECK_THROWS_AS(make_beta_grid(0, 1, Rational(1, 10000000)), ConfigError);
}

TEST_CASE("run config parsing") {
  const RunConfig c = parse_run_config(
      R"({"alpha": 1, "mode": "finite", "betas": [2, 4], "beta_min": 1, "beta_max": 2, "beta_step": 0.5,
          "L": 10, "R": 5, "threads": 2, "seed": 7, "kink_threshold": 1e-5, "coefficient_offsets": {"2": "1/100"}})");
  CHECK(c.beta_grid.size() == 3);
  CHECK(c.L == 10);
  CHECK(c.R == 5);
  CHECK(c.threads == 2);
  CHECK(c.seed == 7);
  CHECK(c.kink_threshold == 1e-5);
  REQUIRE(c.coefficient_offsets.size() == 1);
  CHECK(c.coefficient_offsets[0].first == 2);
  CHECK(c.coefficient_offsets[0].second == Rational(1, 100));

  CHECK_THROWS_AS(parse_run_config(R"({"alpha": 1, "mode": "finite", "betas": [2], "L": -1})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"alpha": 1, "mode": "finite", "betas": [2], "beta_min": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"alpha": 1, "mode": "finite", "betas": [2], "beta_grid": [2, 1]})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"alpha": 1, "mode": "finite", "betas": [2], "R": 0})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"alpha": 1, "mode": "finite", "betas": [1]})"), ScheduleError);
}

}  // TEST_SUITE
