#include <doctest.h>

#include <string>

#include "thermoshift/report.hpp"

using namespace thermoshift;

TEST_SUITE("report") {

TEST_CASE("curve csv round-trips bit-exactly") {
  const auto s = TransitionSchedule::finite(1, {2, 4});
  const std::vector<Rational> grid{2, Rational(5, 2), 3, Rational(7, 2), 4};
  const auto rows = curve_scan(s, grid, 8, 4);
  const std::string text = curve_csv(rows);
  CHECK(text.rfind(std::string(kCurveCsvHeader) + "\n", 0) == 0);
  const auto back = parse_curve_csv(text);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].beta == rows[i].beta);
    CHECK(back[i].lower == rows[i].lower);
    CHECK(back[i].upper == rows[i].upper);
    CHECK(back[i].maximizer_n == rows[i].maximizer_n);
    CHECK(back[i].L == 8);
    CHECK(back[i].R == 4);
  }
  CHECK(curve_csv(back) == text);
  CHECK_THROWS(parse_curve_csv("beta,lower\n1,2\n"));
  CHECK_THROWS(parse_curve_csv(std::string(kCurveCsvHeader) + "\n1,2,3\n"));
}

TEST_CASE("kinks of an exact envelope") {
  const auto s = TransitionSchedule::finite(1, {2, 4});
  const auto grid = std::vector<Rational>{Rational(1, 2), 1, Rational(3, 2), 2, Rational(5, 2), 3, Rational(7, 2),
                                          4, Rational(9, 2), 5};
  const auto rows = curve_scan(s, grid, 6, 3);
  const KinkReport k = curve_kinks(rows, 1e-6);
  CHECK(k.envelope == std::vector<double>{2.0, 4.0});
  CHECK(k.out_of_domain == std::vector<double>{0.5});
  CHECK(KinkReport::from_json(k.to_json()) == k);
}

TEST_CASE("svg has both polylines") {
  const auto s = TransitionSchedule::finite(1, {2, 4});
  const auto rows = curve_scan(s, std::vector<Rational>{2, 3, 4}, 6, 3);
  const std::string svg = curve_svg(rows);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("id=\"lower\"") != std::string::npos);
  CHECK(svg.find("id=\"upper\"") != std::string::npos);
}

}  // TEST_SUITE
