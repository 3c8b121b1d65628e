#include "thermoshift/schedule.hpp"

#include <algorithm>

#include "json_util.hpp"

namespace thermoshift {

namespace detail {

namespace {

class ExactFloatSax : public nlohmann::detail::json_sax_dom_parser<json> {
 public:
  using nlohmann::detail::json_sax_dom_parser<json>::json_sax_dom_parser;
  bool number_float(json::number_float_t /*value*/, const json::string_t& text) {
    json::string_t copy = text;
    return nlohmann::detail::json_sax_dom_parser<json>::string(copy);
  }
};

}  // namespace

json parse_json_exact(const std::string& text) {
  json out;
  ExactFloatSax sax(out, true);
  if (!json::sax_parse(text, &sax)) throw std::invalid_argument("malformed JSON document");
  return out;
}

Rational json_rational(const json& value, const std::string& field) {
  try {
    if (value.is_number_integer()) return Rational(value.get<long long>());
    if (value.is_number_unsigned()) return Rational(BigInt(value.get<unsigned long long>()));
    if (value.is_number_float()) return rational_from_double(value.get<double>());
    if (value.is_string()) return parse_rational(value.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("field '" + field + "': " + e.what());
  }
  throw std::invalid_argument("field '" + field + "' must be a number or a rational string");
}

}  // namespace detail

Rational BetaRule::beta(unsigned j) const {
  if (j < 1) throw ScheduleError("beta index starts at 1");
  switch (kind) {
    case Kind::Geometric:
      return first * pow(second, j);
    case Kind::Affine:
      return first + second * Rational(j);
    case Kind::HarmonicToLimit:
      return first - second / Rational(j);
  }
  throw ScheduleError("unknown beta rule");
}

std::optional<Rational> BetaRule::limit() const {
  if (kind == Kind::HarmonicToLimit) return first;
  return std::nullopt;
}

std::optional<Rational> BetaRule::closed_form_tail(unsigned n) const {
  if (kind != Kind::Geometric) return std::nullopt;
  // sum_{j>=n} (2r)^{-j} / (2s) = (2r)^{1-n} / (2s(2r-1))
  const Rational two_r = 2 * second;
  return Rational(1) / (pow(two_r, n - 1) * 2 * first * (two_r - 1));
}

std::string to_string(BetaRule::Kind kind) {
  switch (kind) {
    case BetaRule::Kind::Geometric:
      return "geometric";
    case BetaRule::Kind::Affine:
      return "affine";
    case BetaRule::Kind::HarmonicToLimit:
      return "harmonic_to_limit";
  }
  return "unknown";
}

TransitionSchedule::TransitionSchedule(Rational alpha, std::variant<FiniteBetas, InfiniteBetas> mode,
                                       Arithmetic arithmetic)
    : alpha_(std::move(alpha)), mode_(std::move(mode)), arithmetic_(arithmetic) {
  if (alpha_ <= 0) throw ScheduleError("alpha must be positive");
  if (const auto* fin = std::get_if<FiniteBetas>(&mode_)) {
    if (fin->betas.empty()) throw ScheduleError("finite schedule needs at least one beta");
    for (std::size_t i = 1; i < fin->betas.size(); ++i) {
      if (fin->betas[i] <= fin->betas[i - 1]) throw ScheduleError("betas not increasing");
    }
    // Finite inputs are rational, so exact arithmetic is always available.
    arithmetic_ = Arithmetic::Rational;
  } else {
    const BetaRule& rule = std::get<InfiniteBetas>(mode_).rule;
    switch (rule.kind) {
      case BetaRule::Kind::Geometric:
        if (rule.first <= 0 || rule.second <= 1) throw ScheduleError("betas not increasing: geometric rule needs scale > 0, ratio > 1");
        break;
      case BetaRule::Kind::Affine:
        if (rule.second <= 0) throw ScheduleError("betas not increasing: affine rule needs slope > 0");
        break;
      case BetaRule::Kind::HarmonicToLimit:
        if (rule.second <= 0) throw ScheduleError("betas not increasing: harmonic rule needs width > 0");
        break;
    }
    if (arithmetic_ == Arithmetic::Rational && !rule.closed_form_tail(1)) {
      throw ScheduleError("rational arithmetic needs a closed-form coefficient tail; rule '" +
                          to_string(rule.kind) + "' requires \"arithmetic\": \"interval\"");
    }
  }
  if (beta(1) <= alpha_) throw ScheduleError("alpha must be strictly below beta_1");
}

TransitionSchedule TransitionSchedule::finite(Rational alpha, std::vector<Rational> betas, Rational c1) {
  return TransitionSchedule(std::move(alpha), FiniteBetas{std::move(betas), std::move(c1)}, Arithmetic::Rational);
}

TransitionSchedule TransitionSchedule::infinite(Rational alpha, BetaRule rule) {
  const Arithmetic arith = rule.closed_form_tail(1) ? Arithmetic::Rational : Arithmetic::Interval;
  return TransitionSchedule(std::move(alpha), InfiniteBetas{rule}, arith);
}

std::optional<unsigned> TransitionSchedule::transition_count() const {
  if (!is_finite()) return std::nullopt;
  return static_cast<unsigned>(finite_mode().betas.size());
}

std::optional<unsigned> TransitionSchedule::top_index() const {
  if (!is_finite()) return std::nullopt;
  return *transition_count() + 1;
}

Rational TransitionSchedule::beta(unsigned n) const {
  if (n < 1) throw ScheduleError("beta index starts at 1");
  if (is_finite()) {
    const auto& betas = finite_mode().betas;
    if (n > betas.size()) throw ScheduleError("beta index beyond the finite schedule");
    return betas[n - 1];
  }
  return infinite_mode().rule.beta(n);
}

std::optional<Rational> TransitionSchedule::beta_limit() const {
  if (is_finite()) return std::nullopt;
  return infinite_mode().rule.limit();
}

TransitionSchedule parse_schedule_json(const std::string& json_text) {
  using detail::json;
  using detail::json_rational;
  json doc;
  try {
    doc = detail::parse_json_exact(json_text);
  } catch (const std::exception& e) {
    throw ScheduleError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ScheduleError("config must be a JSON object");
  try {
    if (!doc.contains("alpha")) throw ScheduleError("config missing 'alpha'");
    Rational alpha = json_rational(doc.at("alpha"), "alpha");
    const std::string mode = doc.value("mode", std::string(doc.contains("betas") ? "finite" : "infinite"));
    std::optional<Arithmetic> arithmetic;
    if (doc.contains("arithmetic")) {
      const std::string a = doc.at("arithmetic").get<std::string>();
      if (a == "rational") {
        arithmetic = Arithmetic::Rational;
      } else if (a == "interval") {
        arithmetic = Arithmetic::Interval;
      } else {
        throw ScheduleError("arithmetic must be \"rational\" or \"interval\"");
      }
    }
    if (mode == "finite") {
      if (!doc.contains("betas") || !doc.at("betas").is_array()) throw ScheduleError("finite mode needs a 'betas' array");
      FiniteBetas fin;
      for (const auto& b : doc.at("betas")) fin.betas.push_back(json_rational(b, "betas"));
      if (doc.contains("c1")) fin.c1 = json_rational(doc.at("c1"), "c1");
      return TransitionSchedule(std::move(alpha), std::move(fin), Arithmetic::Rational);
    }
    if (mode == "infinite") {
      if (!doc.contains("beta_rule") || !doc.at("beta_rule").is_object()) {
        throw ScheduleError("infinite mode needs a 'beta_rule' object");
      }
      const json& r = doc.at("beta_rule");
      const std::string kind = r.value("kind", std::string());
      BetaRule rule;
      auto param = [&](const char* name, Rational fallback) {
        return r.contains(name) ? json_rational(r.at(name), name) : fallback;
      };
      if (kind == "geometric") {
        rule = {BetaRule::Kind::Geometric, param("scale", 1), param("ratio", 2)};
      } else if (kind == "affine") {
        rule = {BetaRule::Kind::Affine, param("offset", 0), param("slope", 1)};
      } else if (kind == "harmonic_to_limit") {
        if (!r.contains("limit")) throw ScheduleError("harmonic_to_limit rule needs 'limit'");
        rule = {BetaRule::Kind::HarmonicToLimit, param("limit", 0), param("width", 1)};
      } else {
        throw ScheduleError("unknown beta_rule kind '" + kind + "'");
      }
      if (doc.contains("beta_limit")) {
        const Rational declared = json_rational(doc.at("beta_limit"), "beta_limit");
        if (rule.limit() != declared) throw ScheduleError("beta_limit does not match the rule's limit");
      }
      const Arithmetic arith = arithmetic.value_or(rule.closed_form_tail(1) ? Arithmetic::Rational : Arithmetic::Interval);
      return TransitionSchedule(std::move(alpha), InfiniteBetas{rule}, arith);
    }
    throw ScheduleError("mode must be \"finite\" or \"infinite\"");
  } catch (const ScheduleError&) {
    throw;
  } catch (const std::exception& e) {
    throw ScheduleError(e.what());
  }
}

std::string schedule_to_json(const TransitionSchedule& schedule) {
  detail::json doc;
  doc["alpha"] = to_string(schedule.alpha());
  doc["arithmetic"] = schedule.exact() ? "rational" : "interval";
  if (schedule.is_finite()) {
    doc["mode"] = "finite";
    auto& betas = doc["betas"] = detail::json::array();
    for (const auto& b : schedule.finite_mode().betas) betas.push_back(to_string(b));
    doc["c1"] = to_string(schedule.finite_mode().c1);
  } else {
    doc["mode"] = "infinite";
    const BetaRule& r = schedule.infinite_mode().rule;
    detail::json rule;
    rule["kind"] = to_string(r.kind);
    switch (r.kind) {
      case BetaRule::Kind::Geometric:
        rule["scale"] = to_string(r.first);
        rule["ratio"] = to_string(r.second);
        break;
      case BetaRule::Kind::Affine:
        rule["offset"] = to_string(r.first);
        rule["slope"] = to_string(r.second);
        break;
      case BetaRule::Kind::HarmonicToLimit:
        rule["limit"] = to_string(r.first);
        rule["width"] = to_string(r.second);
        break;
    }
    doc["beta_rule"] = rule;
  }
  return doc.dump();
}

}  // namespace thermoshift
