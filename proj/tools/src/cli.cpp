#include "thermoshift/cli.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "thermoshift/config.hpp"
#include "thermoshift/diagnostics.hpp"
#include "thermoshift/potential.hpp"
#include "thermoshift/pressure.hpp"
#include "thermoshift/report.hpp"
#include "thermoshift/symbolic.hpp"

namespace thermoshift::cli {

namespace {

using json = nlohmann::json;

struct Options {
  std::string config_path;
  std::string beta_min;
  std::string beta_max;
  std::string beta_step;
  std::optional<std::size_t> L;
  std::optional<std::size_t> R;
  std::optional<unsigned> n_max;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
  std::optional<double> kink_threshold;
  std::string out;
  std::string svg;
  std::string kinks;

  unsigned n = 1;
  std::size_t length = 0;
  std::string word;
  std::optional<std::size_t> origin;
  bool list = false;

  double p = 0.5;
  std::size_t sample_length = 100000;
  double tolerance = 0.05;

  unsigned s = 1;
  std::size_t j_max = 24;
  std::vector<std::size_t> lengths;

  std::string beta;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
}

RunConfig load_config(const Options& o) {
  if (o.config_path.empty()) throw ConfigError("--config is required for this command");
  RunConfig config = parse_run_config(read_file(o.config_path));
  if (o.L) config.L = *o.L;
  if (o.R) config.R = *o.R;
  if (o.n_max) config.n_max = *o.n_max;
  if (o.threads) config.threads = *o.threads;
  if (o.seed) config.seed = *o.seed;
  if (o.kink_threshold) config.kink_threshold = *o.kink_threshold;
  if (!o.out.empty()) config.out = o.out;
  if (!o.svg.empty()) config.svg = o.svg;
  if (!o.kinks.empty()) config.kinks = o.kinks;
  const int given = !o.beta_min.empty() + !o.beta_max.empty() + !o.beta_step.empty();
  if (given == 3) {
    config.beta_grid =
        make_beta_grid(parse_rational(o.beta_min), parse_rational(o.beta_max), parse_rational(o.beta_step));
  } else if (given != 0) {
    throw ConfigError("--beta-min, --beta-max and --beta-step must be given together");
  }
  config.validate();
  return config;
}

void emit(const std::string& path, std::ostream& out, const std::string& text) {
  if (path.empty()) {
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
  } else {
    write_file(path, text);
  }
}

json interval_json(const Interval& x) { return {{"lo", x.lo()}, {"hi", x.hi()}}; }

int cmd_schedule_verify(const Options& o, std::ostream& out) {
  const RunConfig config = load_config(o);
  const TransitionSchedule& schedule = config.schedule;
  const unsigned n_max = std::max(2U, config.n_max);
  std::vector<Rational> grid = config.beta_grid;
  if (grid.empty()) {
    grid.push_back(schedule.alpha());
    const unsigned count = schedule.is_finite() ? *schedule.transition_count() : n_max;
    for (unsigned n = 1; n <= count; ++n) grid.push_back(schedule.beta(n));
    if (auto limit = schedule.beta_limit()) grid.push_back(*limit * 2);
  }
  ScheduleReport report;
  if (config.coefficient_offsets.empty()) {
    report = verify_schedule(schedule, n_max, grid);
  } else {
    unsigned size = n_max;
    for (const auto& [n, offset] : config.coefficient_offsets) size = std::max(size, n);
    CoefficientTable table = CoefficientTable::build(schedule, size + 1, config.tol);
    for (const auto& [n, offset] : config.coefficient_offsets) table = table.with_offset(n, offset);
    report = verify_schedule(schedule, table, n_max, grid);
  }
  emit(config.out, out, report.to_json());
  return report.passed() ? kPass : kCheckFailed;
}

int cmd_curve(const Options& o, std::ostream& out, std::ostream& err) {
  const RunConfig config = load_config(o);
  if (config.beta_grid.empty()) throw ConfigError("empty beta grid");
  UpperBoundOptions options;
  options.threads = config.threads;
  options.tol = config.tol;
  const std::vector<PressureEstimate> rows =
      curve_scan(config.schedule, config.beta_grid, config.L, config.R, options);
  emit(config.out, out, curve_csv(rows));

  const KinkReport kinks = curve_kinks(rows, config.kink_threshold);
  std::string kinks_path = config.kinks;
  if (kinks_path.empty() && !config.out.empty()) kinks_path = config.out + ".kinks.json";
  if (!kinks_path.empty()) write_file(kinks_path, kinks.to_json());
  if (!config.svg.empty()) write_file(config.svg, curve_svg(rows));
  if (!kinks.out_of_domain.empty()) {
    err << "warning: " << kinks.out_of_domain.size()
        << " grid point(s) below alpha: envelope out of domain, bounds still reported\n";
  }
  bool sound = true;
  for (const auto& r : rows) sound = sound && r.lower <= r.upper;
  if (!sound) err << "error: a lower bound exceeds its upper bound\n";
  return sound ? kPass : kCheckFailed;
}

int cmd_language(const Options& o, std::ostream& out) {
  const SubshiftIndex n(o.n);
  json doc;
  doc["n"] = o.n;
  if (!o.word.empty()) {
    const BinaryWord w = BinaryWord::from_string(o.word);
    doc["word"] = o.word;
    doc["contains"] = contains_word(n, w);
    doc["union_contains"] = union_language_contains(w);
  } else {
    if (o.length < 1) throw ConfigError("language needs --length >= 1 or --word");
    doc["length"] = o.length;
    if (o.list) {
      const std::vector<BinaryWord> words = enumerate_language(n, o.length);
      doc["count"] = words.size();
      auto& list = doc["words"] = json::array();
      for (const auto& w : words) list.push_back(w.to_string());
    } else {
      doc["count"] = count_language(n, o.length);
    }
  }
  emit(o.out, out, doc.dump(2));
  return kPass;
}

int cmd_phi(const Options& o, std::ostream& out) {
  const RunConfig config = load_config(o);
  if (o.word.empty()) throw ConfigError("phi needs --word");
  const BinaryWord w = BinaryWord::from_string(o.word);
  const std::size_t origin = o.origin.value_or(w.size() / 2);
  if (origin >= w.size()) throw ConfigError("--origin outside the word");
  const CenteredWindow window(w, origin);
  const PotentialEvaluator evaluator(config.schedule, config.tol);
  json doc;
  doc["word"] = o.word;
  doc["origin"] = origin;
  doc["radius"] = window.symmetric_radius();
  doc["phi"] = interval_json(evaluator.phi(window));
  const unsigned last = config.schedule.is_finite() ? *config.schedule.top_index()
                                                    : stabilization_index(2 * window.symmetric_radius() + 1);
  auto& comps = doc["components"] = json::array();
  for (unsigned n = 1; n <= last; ++n) {
    const DistanceExponent e = distance_exponent(window, SubshiftIndex(n));
    json c = interval_json(evaluator.component(window, SubshiftIndex(n)));
    c["n"] = n;
    c["exponent"] = to_string(e);
    comps.push_back(c);
  }
  emit(config.out, out, doc.dump(2));
  return kPass;
}

int cmd_pins(const Options& o, std::ostream& out) {
  if (o.word.empty()) throw ConfigError("pins needs --word");
  emit(o.out, out, pin_positions(BinaryWord::from_string(o.word)).to_json());
  return kPass;
}

int cmd_kac(const Options& o, std::ostream& out) {
  const KacReport report = kac_check(o.p, o.sample_length, o.seed.value_or(1));
  emit(o.out, out, report.to_json());
  return !report.degenerate && report.kac_error <= o.tolerance ? kPass : kCheckFailed;
}

int cmd_counts(const Options& o, std::ostream& out) {
  const CountBoundReport report = word_count_bound_check(o.s, o.j_max, o.lengths);
  emit(o.out, out, report.to_json());
  return report.passed() ? kPass : kCheckFailed;
}

int cmd_envelope(const Options& o, std::ostream& out) {
  const RunConfig config = load_config(o);
  if (o.beta.empty()) throw ConfigError("envelope needs --beta");
  const Rational beta = parse_rational(o.beta);
  const EnvelopeValue env = predicted_pressure(config.schedule, beta, config.tol);
  json doc;
  doc["beta"] = to_string(beta);
  doc["value"] = interval_json(env.value.enclosure());
  if (env.value.is_exact()) doc["exact"] = to_string(*env.value.exact());
  doc["maximizer"] = env.maximizer.indices;
  doc["fixed_point"] = env.maximizer.fixed_point;
  emit(config.out, out, doc.dump(2));
  return kPass;
}

void add_scan_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--beta-min", o.beta_min, "first grid point (exact decimal or p/q)");
  cmd->add_option("--beta-max", o.beta_max, "last grid point");
  cmd->add_option("--beta-step", o.beta_step, "grid step");
  cmd->add_option("-L", o.L, "cylinder length");
  cmd->add_option("-R", o.R, "window radius");
  cmd->add_option("--threads", o.threads, "worker threads (0: all cores)");
  cmd->add_option("--svg", o.svg, "write an SVG plot of both bounds");
  cmd->add_option("--kinks", o.kinks, "kink sidecar path (default: <out>.kinks.json)");
  cmd->add_option("--kink-threshold", o.kink_threshold, "second-difference threshold per grid step");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Potentials with prescribed phase transitions on the full 2-shift", "thermoshift"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", o.config_path, "JSON schedule and run configuration");
  app.add_option("--n-max", o.n_max, "largest coefficient index checked");
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--out", o.out, "output path (default: stdout)");

  CLI::App* verify = app.add_subcommand("schedule-verify", "check the coefficient identities of a schedule");
  add_scan_flags(verify, o);
  CLI::App* curve = app.add_subcommand("curve", "scan lower/upper pressure bounds over a beta grid (CSV)");
  add_scan_flags(curve, o);
  CLI::App* language = app.add_subcommand("language", "count or test words of the language of X_n");
  language->add_option("--n", o.n, "subshift index")->check(CLI::Range(1U, kMaxSubshiftIndex));
  language->add_option("--length", o.length, "word length to enumerate");
  language->add_option("--word", o.word, "test one word instead");
  language->add_flag("--list", o.list, "list the words, not just the count");
  CLI::App* phi = app.add_subcommand("phi", "enclose phi on the cylinder of a word");
  phi->add_option("--word", o.word, "window symbols")->required();
  phi->add_option("--origin", o.origin, "index of coordinate 0 (default: middle)");
  CLI::App* pins = app.add_subcommand("pins", "greedy pin decomposition of a word");
  pins->add_option("--word", o.word, "word over {0,1}")->required();
  CLI::App* kac = app.add_subcommand("kac", "return-time identity on a Bernoulli sample");
  kac->add_option("--p", o.p, "probability of symbol 1");
  kac->add_option("--length", o.sample_length, "sample length");
  kac->add_option("--tolerance", o.tolerance, "largest accepted Kac error");
  CLI::App* counts = app.add_subcommand("counts", "word-count bounds of the subshift languages");
  counts->add_option("--s", o.s, "subshift index, 0 for the union bound");
  counts->add_option("--j-max", o.j_max, "largest word length")->check(CLI::Range(1, 26));
  counts->add_option("--lengths", o.lengths, "explicit lengths (default 1..j-max)");
  CLI::App* envelope = app.add_subcommand("envelope", "predicted pressure at one beta");
  envelope->add_option("--beta", o.beta, "inverse temperature (exact decimal or p/q)")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsageError;
  }

  try {
    if (*verify) return cmd_schedule_verify(o, out);
    if (*curve) return cmd_curve(o, out, err);
    if (*language) return cmd_language(o, out);
    if (*phi) return cmd_phi(o, out);
    if (*pins) return cmd_pins(o, out);
    if (*kac) return cmd_kac(o, out);
    if (*counts) return cmd_counts(o, out);
    if (*envelope) return cmd_envelope(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace thermoshift::cli
