#pragma once

#include <string>

#include <json.hpp>

#include "thermoshift/numeric.hpp"

namespace thermoshift::detail {

using json = nlohmann::json;

/// Parses JSON keeping floating-point literals as their source text, so
/// "0.1" can later be read as exactly 1/10.
json parse_json_exact(const std::string& text);

/// Reads an integer, a float literal kept as text, or a "p/q" string.
Rational json_rational(const json& value, const std::string& field);

}  // namespace thermoshift::detail
