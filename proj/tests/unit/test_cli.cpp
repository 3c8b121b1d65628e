#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "thermoshift/cli.hpp"
#include "thermoshift/report.hpp"

namespace fs = std::filesystem;
using thermoshift::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "thermoshift");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* name) { return std::string(THERMOSHIFT_TEST_DATA) + "/" + name; }

fs::path scratch(const char* name) {
  const fs::path dir = fs::temp_directory_path() / "thermoshift_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("schedule-verify exit codes") {
  CHECK(invoke({"schedule-verify", "--config", data("geometric.json")}).code == 0);
  CHECK(invoke({"--config", data("finite_reference.json"), "schedule-verify"}).code == 0);
  const Result bad = invoke({"schedule-verify", "--config", data("betas_decreasing.json")});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("betas not increasing") != std::string::npos);
  const Result tampered = invoke({"schedule-verify", "--config", data("tampered.json")});
  CHECK(tampered.code == 1);
  const auto doc = nlohmann::json::parse(tampered.out);
  CHECK_FALSE(doc.at("passed").get<bool>());
  CHECK(doc.at("violations").at(0).at("item") == 1);
  CHECK(invoke({"schedule-verify", "--config", data("harmonic_limit.json")}).code == 0);
  CHECK(invoke({"schedule-verify", "--config", data("missing.json")}).code == 2);
  CHECK(invoke({"schedule-verify"}).code == 2);
}

TEST_CASE("curve writes csv and kink sidecar") {
  const fs::path csv = scratch("curve.csv");
  const fs::path svg = scratch("curve.svg");
  const Result r = invoke({"curve", "--config", data("finite_reference.json"), "--beta-min", "1", "--beta-max", "6",
                           "--beta-step", "0.1", "-L", "8", "-R", "4", "--out", csv.string(), "--svg", svg.string()});
  REQUIRE(r.code == 0);
  const auto rows = thermoshift::parse_curve_csv(slurp(csv));
  CHECK(rows.size() == 51);
  const auto kinks = thermoshift::KinkReport::from_json(slurp(fs::path(csv.string() + ".kinks.json")));
  CHECK(kinks.envelope == std::vector<double>{2.0, 4.0});
  CHECK(slurp(svg).find("polyline") != std::string::npos);
}

TEST_CASE("curve reports out-of-domain points") {
  const Result r = invoke({"curve", "--config", data("finite_reference.json"), "--beta-min", "0.5", "--beta-max", "2",
                           "--beta-step", "0.5", "-L", "6", "-R", "3"});
  CHECK(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
  CHECK(r.out.rfind("beta,lower,upper", 0) == 0);
  CHECK(invoke({"curve", "--config", data("finite_reference.json"), "--beta-min", "1"}).code == 2);
  CHECK(invoke({"curve", "--config", data("finite_reference.json")}).code == 2);
}

TEST_CASE("language, phi and pins") {
  const auto lang = nlohmann::json::parse(invoke({"language", "--n", "1", "--length", "3"}).out);
  CHECK(lang.at("count") == 6);
  const auto list = nlohmann::json::parse(invoke({"language", "--n", "1", "--length", "2", "--list"}).out);
  CHECK(list.at("words").size() == 4);
  const auto member = nlohmann::json::parse(invoke({"language", "--n", "2", "--word", "00011110"}).out);
  CHECK(member.at("contains").get<bool>());
  CHECK(invoke({"language", "--n", "0", "--length", "3"}).code == 2);

  const Result phi = invoke({"phi", "--config", data("geometric.json"), "--word", "00000000000"});
  REQUIRE(phi.code == 0);
  const auto p = nlohmann::json::parse(phi.out);
  CHECK(p.at("phi").at("hi") == 0.0);
  CHECK(invoke({"phi", "--config", data("geometric.json"), "--word", "0101", "--origin", "9"}).code == 2);

  const auto pins = nlohmann::json::parse(invoke({"pins", "--word", "011011011011"}).out);
  CHECK(pins.at("pins") == std::vector<int>{5, 11});
  CHECK(invoke({"pins", "--word", "0121"}).code == 2);
}

TEST_CASE("kac, counts and envelope") {
  CHECK(invoke({"kac", "--p", "0.5", "--length", "100000"}).code == 0);
  CHECK(invoke({"kac", "--p", "1.5"}).code == 2);
  CHECK(invoke({"counts", "--s", "1", "--j-max", "24"}).code == 0);
  CHECK(invoke({"counts", "--s", "2", "--j-max", "8"}).code == 1);
  const auto env = nlohmann::json::parse(invoke({"envelope", "--config", data("finite_reference.json"), "--beta", "3"}).out);
  CHECK(env.at("exact") == "1/8");
  CHECK(invoke({"envelope", "--config", data("finite_reference.json"), "--beta", "1/2"}).code == 2);
  const auto frozen = nlohmann::json::parse(invoke({"envelope", "--config", data("harmonic_limit.json"), "--beta", "3"}).out);
  CHECK(frozen.at("fixed_point").get<bool>());
}

TEST_CASE("usage errors") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"no-such-command"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
}

}  // TEST_SUITE
