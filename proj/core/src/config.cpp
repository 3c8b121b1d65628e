#include "thermoshift/config.hpp"

#include <type_traits>

#include "json_util.hpp"

namespace thermoshift {

std::vector<Rational> make_beta_grid(const Rational& lo, const Rational& hi, const Rational& step) {
  if (step <= 0) throw ConfigError("beta step must be positive");
  if (hi < lo) throw ConfigError("beta max below beta min");
  const Rational count = (hi - lo) / step;
  if (count > 1000000) throw ConfigError("beta grid larger than 10^6 points");
  std::vector<Rational> grid;
  for (Rational b = lo; b <= hi; b += step) grid.push_back(b);
  return grid;
}

void RunConfig::validate() const {
  if (L < 1) throw ConfigError("L must be >= 1");
  if (R < 1) throw ConfigError("R must be >= 1");
  if (n_max < 1) throw ConfigError("n_max must be >= 1");
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  for (std::size_t i = 1; i < beta_grid.size(); ++i) {
    if (beta_grid[i] <= beta_grid[i - 1]) throw ConfigError("beta grid must be strictly ascending");
  }
}

RunConfig parse_run_config(const std::string& json_text) {
  RunConfig config(parse_schedule_json(json_text));
  detail::json doc = detail::parse_json_exact(json_text);
  try {
    auto count = [&](const char* key, auto& field) {
      if (!doc.contains(key)) return;
      const Rational v = detail::json_rational(doc.at(key), key);
      if (v < 0 || boost::multiprecision::denominator(v) != 1) {
        throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
      }
      field = static_cast<std::remove_reference_t<decltype(field)>>(boost::multiprecision::numerator(v));
    };
    count("L", config.L);
    count("R", config.R);
    count("n_max", config.n_max);
    count("seed", config.seed);
    count("threads", config.threads);
    if (doc.contains("tol")) config.tol = to_double(detail::json_rational(doc.at("tol"), "tol"));
    if (doc.contains("kink_threshold")) {
      config.kink_threshold = to_double(detail::json_rational(doc.at("kink_threshold"), "kink_threshold"));
    }
    if (doc.contains("coefficient_offsets")) {
      for (const auto& [key, value] : doc.at("coefficient_offsets").items()) {
        const unsigned long n = std::stoul(key);
        if (n < 1) throw ConfigError("coefficient offset index starts at 1");
        config.coefficient_offsets.emplace_back(static_cast<unsigned>(n),
                                                detail::json_rational(value, "coefficient_offsets"));
      }
    }
    if (doc.contains("beta_grid")) {
      for (const auto& b : doc.at("beta_grid")) config.beta_grid.push_back(detail::json_rational(b, "beta_grid"));
    } else if (doc.contains("beta_min") || doc.contains("beta_max") || doc.contains("beta_step")) {
      if (!doc.contains("beta_min") || !doc.contains("beta_max") || !doc.contains("beta_step")) {
        throw ConfigError("beta_min, beta_max and beta_step must be given together");
      }
      config.beta_grid = make_beta_grid(detail::json_rational(doc.at("beta_min"), "beta_min"),
                                        detail::json_rational(doc.at("beta_max"), "beta_max"),
                                        detail::json_rational(doc.at("beta_step"), "beta_step"));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  config.validate();
  return config;
}

}  // namespace thermoshift
