#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "thermoshift/numeric.hpp"
#include "thermoshift/potential.hpp"
#include "thermoshift/schedule.hpp"

namespace thermoshift {

/// Malformed or inconsistent run configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Ascending grid lo, lo + step, ... up to hi (inclusive when hit exactly).
std::vector<Rational> make_beta_grid(const Rational& lo, const Rational& hi, const Rational& step);

struct RunConfig {
  explicit RunConfig(TransitionSchedule s) : schedule(std::move(s)) {}

  TransitionSchedule schedule;
  std::vector<Rational> beta_grid;
  std::size_t L = 16;
  std::size_t R = 8;
  unsigned n_max = 8;
  double tol = kDefaultTailTolerance;
  double kink_threshold = 1e-6;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out;
  std::string svg;
  std::string kinks;
  /// (n, offset) pairs added to c_n before verification; test fixtures only.
  std::vector<std::pair<unsigned, Rational>> coefficient_offsets;

  /// Grid ascending and duplicate-free, L >= 1, R >= 1, n_max >= 1, tol > 0.
  void validate() const;
};

/// Schedule fields as in parse_schedule_json plus optional run parameters:
///   "beta_grid": [..] or "beta_min"/"beta_max"/"beta_step",
///   "L", "R", "n_max", "tol", "kink_threshold", "seed", "threads",
///   "coefficient_offsets": {"2": "1/100"}.
RunConfig parse_run_config(const std::string& json_text);

}  // namespace thermoshift
