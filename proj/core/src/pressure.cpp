#include "thermoshift/pressure.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <thread>

#include "thermoshift/symbolic.hpp"

namespace thermoshift {

std::string Maximizer::label() const {
  if (fixed_point) return "fixed-point";
  std::string out;
  for (unsigned n : indices) {
    if (!out.empty()) out += '|';
    out += std::to_string(n);
  }
  return out;
}

// ---------------------------------------------------------------------------
// envelope

namespace {

Quantity line_value(const TransitionSchedule& schedule, unsigned n, const Rational& beta, double tol) {
  return Quantity(CoefficientTable::entropy(n)) + Quantity(beta) * coefficient(schedule, n, tol);
}

constexpr unsigned kMaxEnvelopeIndex = 1U << 16U;

// Number of scheduled beta_i strictly below beta, searched exponentially
// then by bisection over the increasing sequence.
unsigned count_below(const TransitionSchedule& schedule, const Rational& beta) {
  if (schedule.is_finite()) {
    const auto& betas = schedule.finite_mode().betas;
    return static_cast<unsigned>(std::lower_bound(betas.begin(), betas.end(), beta) - betas.begin());
  }
  if (schedule.beta(1) >= beta) return 0;
  unsigned lo = 1;  // beta_lo < beta
  unsigned hi = 2;
  while (schedule.beta(hi) < beta) {
    lo = hi;
    hi *= 2;
    if (hi > kMaxEnvelopeIndex) throw SizeLimitError("envelope segment index beyond 65536; beta too close to the limit");
  }
  while (hi - lo > 1) {
    const unsigned mid = lo + (hi - lo) / 2;
    (schedule.beta(mid) < beta ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

EnvelopeValue envelope_formula(const TransitionSchedule& schedule, const Rational& beta, double tol) {
  if (auto limit = schedule.beta_limit(); limit && beta >= *limit) {
    return {Quantity(Rational(0)), Maximizer{{}, true}};
  }
  const unsigned below = count_below(schedule, beta);
  const unsigned m = below + 1;
  Maximizer who{{m}, false};
  const bool at_kink = schedule.is_finite() ? m <= *schedule.transition_count() && schedule.beta(m) == beta
                                            : schedule.beta(m) == beta;
  if (at_kink) who.indices.push_back(m + 1);
  return {line_value(schedule, m, beta, tol), std::move(who)};
}

EnvelopeValue predicted_pressure(const TransitionSchedule& schedule, const Rational& beta, double tol) {
  if (beta < schedule.alpha()) {
    throw OutOfDomainError("beta = " + to_string(beta) + " is below alpha = " + to_string(schedule.alpha()) +
                           "; the envelope is only established for beta >= alpha");
  }
  return envelope_formula(schedule, beta, tol);
}

PressureCurve kink_points(const TransitionSchedule& schedule, unsigned n_max) {
  if (n_max < 1) throw std::invalid_argument("kink_points needs n_max >= 1");
  PressureCurve curve;
  const bool finite = schedule.is_finite();
  const unsigned count = finite ? std::min(n_max, *schedule.transition_count()) : n_max;
  const bool complete = finite && count == *schedule.transition_count();
  const CoefficientTable table = CoefficientTable::build(schedule, count + 1);

  Rational lo = 0;
  for (unsigned n = 1; n <= count; ++n) {
    const Rational beta = schedule.beta(n);
    curve.segments.push_back({lo, beta, n, CoefficientTable::entropy(n), table.c(n)});
    curve.kinks.push_back({beta, Rational(1) / (pow2(static_cast<long>(n) + 1) * beta)});
    lo = beta;
  }
  const unsigned last = count + 1;
  std::optional<Rational> hi;
  if (!complete) hi = schedule.beta(last);
  curve.segments.push_back({lo, hi, last, CoefficientTable::entropy(last), table.c(last)});
  if (complete) {
    curve.tail_slope = table.limit();
    curve.freezing_beta = schedule.beta(count);
  } else if (auto limit = schedule.beta_limit()) {
    curve.tail_slope = Quantity(Rational(0));
    curve.freezing_beta = *limit;
    curve.segments.push_back({*limit, std::nullopt, 0, Rational(0), Quantity(Rational(0))});
  }
  return curve;
}

// ---------------------------------------------------------------------------
// cylinder sums

namespace {

constexpr std::size_t kChunkWords = 4096;
constexpr double kUnitRoundoff = 0x1p-53;

unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1U, std::thread::hardware_concurrency());
}

// Runs body(i) for i in [0, count); each index is handled by exactly one
// worker, so any per-index output is independent of the thread count.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
  };
  std::vector<std::jthread> pool;
  pool.reserve(threads - 1);
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
}

}  // namespace

CylinderSumBound::CylinderSumBound(const TransitionSchedule& schedule, std::size_t length, std::size_t radius,
                                   const UpperBoundOptions& options)
    : CylinderSumBound(std::make_shared<const PotentialEvaluator>(schedule, options.tol), length, radius, options) {}

CylinderSumBound::CylinderSumBound(std::shared_ptr<const PotentialEvaluator> evaluator, std::size_t length,
                                   std::size_t radius, const UpperBoundOptions& options)
    : evaluator_(std::move(evaluator)), length_(length), radius_(radius), threads_(resolve_threads(options.threads)) {
  if (options.max_length > kMaxCylinderLength) {
    throw SizeLimitError("cylinder length cap cannot exceed " + std::to_string(kMaxCylinderLength));
  }
  if (length_ < 1 || length_ > options.max_length) {
    throw SizeLimitError("cylinder length L = " + std::to_string(length_) + " outside [1, " +
                         std::to_string(options.max_length) + "]");
  }
  if (radius_ < 1) throw std::invalid_argument("window radius R must be >= 1");
  build_tables();
}

void CylinderSumBound::build_tables() {
  const std::size_t max_rho = std::min(radius_, (length_ - 1) / 2);
  phi_upper_.resize(max_rho + 1);
  for (std::size_t rho = 0; rho <= max_rho; ++rho) {
    const std::size_t width = 2 * rho + 1;
    std::vector<double>& table = phi_upper_[rho];
    table.assign(std::size_t{1} << width, 0.0);
    const std::size_t blocks = (table.size() + kChunkWords - 1) / kChunkWords;
    parallel_for(blocks, threads_, [&](std::size_t b) {
      const std::size_t end = std::min(table.size(), (b + 1) * kChunkWords);
      for (std::size_t key = b * kChunkWords; key < end; ++key) {
        const CenteredWindow window(BinaryWord::from_lsb_bits(key, width), rho);
        table[key] = evaluator_->phi(window).hi();
      }
    });
    for (double v : table) max_abs_phi_ = std::max(max_abs_phi_, std::abs(v));
  }
}

double CylinderSumBound::evaluate(double beta) const { return evaluate(std::span<const double>(&beta, 1)).front(); }

std::vector<double> CylinderSumBound::evaluate(std::span<const double> betas) const {
  for (double b : betas) {
    if (!(b >= 0.0) || !std::isfinite(b)) throw std::invalid_argument("upper bound requires finite beta >= 0");
  }
  const std::size_t L = length_;
  const std::size_t words = std::size_t{1} << L;
  const std::size_t chunk = std::min(words, kChunkWords);
  const std::size_t chunks = words / chunk;
  const std::size_t nb = betas.size();

  // Position i reads the central word of radius rho_i starting at bit i - rho_i.
  std::vector<std::size_t> rho(L);
  std::vector<std::uint64_t> mask(L);
  for (std::size_t i = 0; i < L; ++i) {
    rho[i] = std::min({i, L - 1 - i, radius_});
    mask[i] = (std::uint64_t{1} << (2 * rho[i] + 1)) - 1;
  }

  // Per chunk and beta: (max exponent, sum of 2^{exponent - max}).
  std::vector<double> chunk_max(chunks * nb);
  std::vector<double> chunk_sum(chunks * nb);
  parallel_for(chunks, threads_, [&](std::size_t c) {
    std::vector<double> sums(chunk);
    double smax = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < chunk; ++k) {
      const std::uint64_t word = c * chunk + k;
      double s = 0.0;
      for (std::size_t i = 0; i < L; ++i) {
        s += phi_upper_[rho[i]][(word >> (i - rho[i])) & mask[i]];
      }
      sums[k] = s;
      smax = std::max(smax, s);
    }
    for (std::size_t b = 0; b < nb; ++b) {
      const double beta = betas[b];
      double acc = 0.0;
      for (double s : sums) acc += std::exp2(beta * (s - smax));
      chunk_max[c * nb + b] = beta * smax;
      chunk_sum[c * nb + b] = acc;
    }
  });

  std::vector<double> out(nb);
  const double Ld = static_cast<double>(L);
  for (std::size_t b = 0; b < nb; ++b) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < chunks; ++c) m = std::max(m, chunk_max[c * nb + b]);
    double z = 0.0;
    for (std::size_t c = 0; c < chunks; ++c) z += chunk_sum[c * nb + b] * std::exp2(chunk_max[c * nb + b] - m);
    const double log_z = std::log2(z);
    double value = (m + log_z) / Ld;
    const double beta = betas[b];
    if (beta != 0.0) {
      // Every step above is exact when beta == 0. Otherwise pad for: the
      // float sums S (L^2 u max|phi|), the exponents and their exp2, the
      // chunk sums and merge, the final log2 and division.
      const double s_err = 1.01 * Ld * Ld * kUnitRoundoff * max_abs_phi_;
      const double y_max = beta * 2.0 * Ld * max_abs_phi_;
      const double terms = static_cast<double>(chunk + chunks) + 8.0;
      const double pad_bits = 1.01 * terms * kUnitRoundoff / std::log(2.0) + 8.0 * kUnitRoundoff * y_max +
                              beta * s_err + 4.0 * kUnitRoundoff * (std::abs(m) + std::abs(log_z) + 1.0);
      value += pad_bits / Ld + 2.0 * kUnitRoundoff * std::abs(value);
      value = next_up(value);
    }
    out[b] = value;
  }
  return out;
}

double pressure_upper_bound(const TransitionSchedule& schedule, double beta, std::size_t length, std::size_t radius,
                            const UpperBoundOptions& options) {
  if (!(beta >= 0.0)) throw std::invalid_argument("upper bound requires beta >= 0");
  return CylinderSumBound(schedule, length, radius, options).evaluate(beta);
}

// ---------------------------------------------------------------------------
// measures

MeasureSpec MeasureSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string kind(text.substr(0, colon));
  const std::string arg = colon == std::string_view::npos ? std::string() : std::string(text.substr(colon + 1));
  try {
    if (kind == "maxent") {
      const long n = std::stol(arg);
      if (n < 1) throw std::invalid_argument("index");
      return max_entropy(static_cast<unsigned>(n));
    }
    if (kind == "dirac") {
      if (arg != "0" && arg != "1") throw std::invalid_argument("symbol");
      return dirac(arg == "1" ? 1 : 0);
    }
    if (kind == "bernoulli") {
      const double p = to_double(parse_rational(arg));
      if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p");
      return bernoulli(p);
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed measure spec '" + std::string(text) + "'");
  }
  throw std::invalid_argument("unknown measure spec '" + std::string(text) +
                              "' (expected maxent:N, dirac:0|1 or bernoulli:P)");
}

std::string MeasureSpec::to_string() const {
  switch (kind) {
    case Kind::MaxEntropy:
      return "maxent:" + std::to_string(n);
    case Kind::DiracFixedPoint:
      return "dirac:" + std::to_string(symbol);
    case Kind::Bernoulli: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "bernoulli:%.17g", p);
      return buf;
    }
  }
  return "unknown";
}

namespace {

Interval binary_entropy(double p) {
  if (p == 0.0 || p == 1.0) return Interval(0.0);
  const Interval pi(p);
  const Interval qi = Interval(1.0) - pi;
  return -(pi * log2(pi) + qi * log2(qi));
}

}  // namespace

Interval measure_pressure_enclosure(const PotentialEvaluator& evaluator, double beta, const MeasureSpec& measure,
                                    std::size_t radius) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("lower bound requires finite beta >= 0");
  const Interval b(beta);
  switch (measure.kind) {
    case MeasureSpec::Kind::MaxEntropy: {
      const CoefficientTable& table = evaluator.table();
      if (measure.n > table.size()) throw std::invalid_argument("measure index beyond the schedule's coefficients");
      return Interval::enclose(CoefficientTable::entropy(measure.n)) + b * table.c(measure.n).enclosure();
    }
    case MeasureSpec::Kind::DiracFixedPoint: {
      BinaryWord word(2 * radius + 1);
      for (std::size_t i = 0; i < word.size(); ++i) word.set(i, measure.symbol);
      return b * evaluator.phi(CenteredWindow(word, radius));
    }
    case MeasureSpec::Kind::Bernoulli: {
      const std::size_t width = 2 * radius + 1;
      if (width > 23) throw SizeLimitError("Bernoulli lower bound limited to radius 11");
      const double p = measure.p;
      if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("Bernoulli parameter outside [0, 1]");
      // weight[k] encloses p^k (1-p)^{width-k}
      const Interval pi(p);
      const Interval qi = Interval(1.0) - pi;
      std::vector<Interval> weight(width + 1);
      for (std::size_t k = 0; k <= width; ++k) {
        Interval w(1.0);
        for (std::size_t i = 0; i < k; ++i) w = w * pi;
        for (std::size_t i = k; i < width; ++i) w = w * qi;
        weight[k] = w;
      }
      Interval integral(0.0);
      for (std::uint64_t key = 0; key < (std::uint64_t{1} << width); ++key) {
        const Interval& w = weight[static_cast<std::size_t>(std::popcount(key))];
        if (w.hi() == 0.0) continue;
        const double lo = evaluator.phi(CenteredWindow(BinaryWord::from_lsb_bits(key, width), radius)).lo();
        integral = integral + w * Interval(lo);
      }
      return binary_entropy(p) + b * integral;
    }
  }
  throw std::invalid_argument("unknown measure kind");
}

double measure_pressure_lower_bound(const TransitionSchedule& schedule, double beta, const MeasureSpec& measure,
                                    std::size_t radius) {
  const PotentialEvaluator evaluator(schedule);
  return measure_pressure_enclosure(evaluator, beta, measure, radius).lo();
}

// ---------------------------------------------------------------------------
// kinks and scans

std::vector<double> detect_kinks(std::span<const std::pair<double, double>> samples, double jump_threshold) {
  if (samples.size() < 3) throw std::invalid_argument("kink detection needs at least 3 samples");
  const double step = (samples.back().first - samples.front().first) / static_cast<double>(samples.size() - 1);
  if (!(step > 0.0)) throw std::invalid_argument("kink detection needs an ascending grid");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double d = samples[i].first - samples[i - 1].first;
    if (std::abs(d - step) > 1e-9 * std::max(1.0, std::abs(step))) {
      throw std::invalid_argument("kink detection needs a uniform grid");
    }
  }
  std::vector<double> out;
  std::size_t best = 0;
  double best_d = 0.0;
  bool in_run = false;
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
    const double d = samples[i + 1].second - 2.0 * samples[i].second + samples[i - 1].second;
    if (d > jump_threshold * step) {
      if (!in_run || d > best_d) {
        best = i;
        best_d = d;
      }
      in_run = true;
    } else if (in_run) {
      out.push_back(samples[best].first);
      in_run = false;
    }
  }
  if (in_run) out.push_back(samples[best].first);
  return out;
}

std::vector<PressureEstimate> curve_scan(const TransitionSchedule& schedule, std::span<const Rational> beta_grid,
                                         std::size_t length, std::size_t radius, const UpperBoundOptions& options) {
  if (beta_grid.empty()) throw std::invalid_argument("empty beta grid");
  std::vector<double> betas;
  betas.reserve(beta_grid.size());
  for (std::size_t i = 0; i < beta_grid.size(); ++i) {
    if (i > 0 && beta_grid[i] <= beta_grid[i - 1]) throw std::invalid_argument("beta grid must be strictly ascending");
    betas.push_back(to_double(beta_grid[i]));
  }
  const CylinderSumBound bound(schedule, length, radius, options);
  const std::vector<double> upper = bound.evaluate(betas);

  std::vector<PressureEstimate> rows;
  rows.reserve(betas.size());
  for (std::size_t i = 0; i < betas.size(); ++i) {
    const EnvelopeValue env = envelope_formula(schedule, beta_grid[i], options.tol);
    PressureEstimate row;
    row.beta = betas[i];
    row.L = length;
    row.R = radius;
    row.upper = upper[i];
    row.lower = env.value.enclosure().lo();
    row.fixed_point = env.maximizer.fixed_point;
    row.maximizer_n = env.maximizer.primary();
    row.in_domain = beta_grid[i] >= schedule.alpha();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace thermoshift
