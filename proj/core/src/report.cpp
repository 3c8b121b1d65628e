#include "thermoshift/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json_util.hpp"

namespace thermoshift {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& field) {
  std::size_t used = 0;
  const double v = std::stod(field, &used);
  if (used != field.size()) throw std::invalid_argument("malformed number '" + field + "'");
  return v;
}

std::size_t parse_size(const std::string& field) {
  std::size_t used = 0;
  const unsigned long long v = std::stoull(field, &used);
  if (used != field.size()) throw std::invalid_argument("malformed integer '" + field + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace

std::string curve_csv(std::span<const PressureEstimate> rows) {
  std::string out(kCurveCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += g17(r.beta) + ',' + g17(r.lower) + ',' + g17(r.upper) + ',' + g17(r.gap()) + ',' +
           std::to_string(r.maximizer_n) + ',' + std::to_string(r.L) + ',' + std::to_string(r.R) + '\n';
  }
  return out;
}

std::vector<PressureEstimate> parse_curve_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCurveCsvHeader) throw std::invalid_argument("missing curve CSV header");
  std::vector<PressureEstimate> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream cells(line);
    for (std::string cell; std::getline(cells, cell, ',');) f.push_back(cell);
    if (f.size() != 7) throw std::invalid_argument("curve CSV row needs 7 fields: " + line);
    PressureEstimate r;
    r.beta = parse_double(f[0]);
    r.lower = parse_double(f[1]);
    r.upper = parse_double(f[2]);
    r.maximizer_n = static_cast<unsigned>(parse_size(f[4]));
    r.fixed_point = r.maximizer_n == 0;
    r.L = parse_size(f[5]);
    r.R = parse_size(f[6]);
    rows.push_back(r);
  }
  return rows;
}

std::string KinkReport::to_json() const {
  detail::json doc;
  doc["threshold"] = threshold;
  doc["envelope"] = envelope;
  doc["upper"] = upper;
  doc["out_of_domain"] = out_of_domain;
  return doc.dump(2);
}

KinkReport KinkReport::from_json(const std::string& text) {
  const detail::json doc = detail::json::parse(text);
  KinkReport r;
  r.threshold = doc.at("threshold").get<double>();
  r.envelope = doc.at("envelope").get<std::vector<double>>();
  r.upper = doc.at("upper").get<std::vector<double>>();
  r.out_of_domain = doc.at("out_of_domain").get<std::vector<double>>();
  return r;
}

KinkReport curve_kinks(std::span<const PressureEstimate> rows, double threshold) {
  KinkReport report;
  report.threshold = threshold;
  std::vector<std::pair<double, double>> lower;
  std::vector<std::pair<double, double>> upper;
  for (const auto& r : rows) {
    if (!r.in_domain) {
      report.out_of_domain.push_back(r.beta);
      continue;
    }
    lower.emplace_back(r.beta, r.lower);
    upper.emplace_back(r.beta, r.upper);
  }
  if (lower.size() >= 3) {
    report.envelope = detect_kinks(lower, threshold);
    report.upper = detect_kinks(upper, threshold);
  }
  return report;
}

std::string curve_svg(std::span<const PressureEstimate> rows) {
  constexpr double kWidth = 640.0;
  constexpr double kHeight = 400.0;
  constexpr double kMargin = 40.0;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n";
  if (!rows.empty()) {
    double bmin = rows.front().beta;
    double bmax = rows.back().beta;
    double vmin = rows.front().lower;
    double vmax = rows.front().upper;
    for (const auto& r : rows) {
      vmin = std::min({vmin, r.lower, r.upper});
      vmax = std::max({vmax, r.lower, r.upper});
    }
    if (bmax == bmin) bmax = bmin + 1.0;
    if (vmax == vmin) vmax = vmin + 1.0;
    auto x = [&](double b) { return kMargin + (b - bmin) / (bmax - bmin) * (kWidth - 2 * kMargin); };
    auto y = [&](double v) { return kHeight - kMargin - (v - vmin) / (vmax - vmin) * (kHeight - 2 * kMargin); };
    auto polyline = [&](const char* colour, const char* name, auto value) {
      svg << "  <polyline id=\"" << name << "\" fill=\"none\" stroke=\"" << colour << "\" points=\"";
      for (const auto& r : rows) svg << g17(x(r.beta)) << ',' << g17(y(value(r))) << ' ';
      svg << "\"/>\n";
    };
    polyline("black", "lower", [](const PressureEstimate& r) { return r.lower; });
    polyline("red", "upper", [](const PressureEstimate& r) { return r.upper; });
    svg << "  <text x=\"" << kMargin << "\" y=\"" << kMargin / 2 << "\">beta " << g17(bmin) << " .. " << g17(bmax)
        << ", pressure " << g17(vmin) << " .. " << g17(vmax) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace thermoshift
