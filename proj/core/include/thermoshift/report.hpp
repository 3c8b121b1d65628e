#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "thermoshift/pressure.hpp"

namespace thermoshift {

inline constexpr std::string_view kCurveCsvHeader = "beta,lower,upper,gap,maximizer_n,L,R";

/// One row per estimate, doubles as %.17g so they re-parse bit-exactly.
/// LF line endings, header row first.
std::string curve_csv(std::span<const PressureEstimate> rows);
/// Inverse of curve_csv. Restores the CSV columns only; fixed_point is
/// recovered from maximizer_n == 0 and in_domain is left true.
std::vector<PressureEstimate> parse_curve_csv(std::string_view text);

struct KinkReport {
  double threshold = 0.0;
  std::vector<double> envelope;  // kinks of the lower (envelope) column
  std::vector<double> upper;     // kinks of the upper-bound column
  std::vector<double> out_of_domain;

  [[nodiscard]] std::string to_json() const;
  static KinkReport from_json(const std::string& text);
  friend bool operator==(const KinkReport&, const KinkReport&) = default;
};

KinkReport curve_kinks(std::span<const PressureEstimate> rows, double threshold);

/// Polylines of the lower and upper columns over beta.
std::string curve_svg(std::span<const PressureEstimate> rows);

}  // namespace thermoshift
