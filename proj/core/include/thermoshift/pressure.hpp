#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thermoshift/numeric.hpp"
#include "thermoshift/potential.hpp"
#include "thermoshift/schedule.hpp"

namespace thermoshift {

/// beta below alpha, where no envelope formula is available.
class OutOfDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Which invariant measures attain the envelope: indices n of the maximal
/// entropy measures of X_n, or the fixed-point class past beta_infinity.
struct Maximizer {
  std::vector<unsigned> indices;
  bool fixed_point = false;

  /// Largest attaining index: the branch that continues right of a kink.
  [[nodiscard]] unsigned primary() const { return indices.empty() ? 0 : indices.back(); }
  [[nodiscard]] std::string label() const;
};

struct EnvelopeValue {
  Quantity value;
  Maximizer maximizer;
};

/// max_n (h_n + beta c_n), together with beta c when beta >= beta_infinity.
/// Throws OutOfDomainError for beta < alpha.
EnvelopeValue predicted_pressure(const TransitionSchedule& schedule, const Rational& beta,
                                 double tol = kDefaultTailTolerance);

/// The same maximum without the domain check. Below alpha it is only the
/// value of the measures the formula names, a lower bound on the pressure.
EnvelopeValue envelope_formula(const TransitionSchedule& schedule, const Rational& beta,
                               double tol = kDefaultTailTolerance);

struct Segment {
  Rational beta_lo;                 // 0 for the first segment
  std::optional<Rational> beta_hi;  // nullopt when unbounded
  unsigned index = 0;               // 0 for the fixed-point segment
  Rational intercept;               // h_n
  Quantity slope;                   // c_n
};

struct Kink {
  Rational beta;
  Rational slope_jump;  // c_{n+1} - c_n = 1 / (2^{n+1} beta_n)
};

struct PressureCurve {
  std::vector<Segment> segments;
  std::vector<Kink> kinks;
  /// Asymptotic slope: c_{N+1} (finite) or c = 0 (infinite with a limit).
  /// nullopt for an unbounded infinite schedule truncated at n_max.
  std::optional<Quantity> tail_slope;
  /// Where the envelope becomes affine for good.
  std::optional<Rational> freezing_beta;
};

/// Kinks at beta_1..beta_{n_max} (all of them in finite mode when N <= n_max).
PressureCurve kink_points(const TransitionSchedule& schedule, unsigned n_max);

inline constexpr std::size_t kMaxCylinderLength = 24;

struct UpperBoundOptions {
  std::size_t max_length = kMaxCylinderLength;
  unsigned threads = 0;  // 0: hardware concurrency
  double tol = kDefaultTailTolerance;
};

/// (1/L) log2 sum_{w in {0,1}^L} 2^{beta S+(w)}, S+(w) the sum of phi upper
/// endpoints on windows of radius min(i, L-1-i, R) around each position.
///
/// phi+ is tabulated once per radius, keyed by the central word. The word
/// sum runs over fixed chunks of 4096 words whose partial log-sum-exp
/// states are merged in chunk order, so results do not depend on the
/// thread count. The returned value is padded outward for rounding.
class CylinderSumBound {
 public:
  CylinderSumBound(const TransitionSchedule& schedule, std::size_t length, std::size_t radius,
                   const UpperBoundOptions& options = {});
  CylinderSumBound(std::shared_ptr<const PotentialEvaluator> evaluator, std::size_t length, std::size_t radius,
                   const UpperBoundOptions& options = {});

  [[nodiscard]] std::size_t length() const { return length_; }
  [[nodiscard]] std::size_t radius() const { return radius_; }

  [[nodiscard]] double evaluate(double beta) const;
  [[nodiscard]] std::vector<double> evaluate(std::span<const double> betas) const;

 private:
  void build_tables();

  std::shared_ptr<const PotentialEvaluator> evaluator_;
  std::size_t length_;
  std::size_t radius_;
  unsigned threads_;
  std::vector<std::vector<double>> phi_upper_;  // per radius, indexed by LSB-first central word
  double max_abs_phi_ = 0.0;
};

double pressure_upper_bound(const TransitionSchedule& schedule, double beta, std::size_t length,
                            std::size_t radius, const UpperBoundOptions& options = {});

struct MeasureSpec {
  enum class Kind { MaxEntropy, DiracFixedPoint, Bernoulli };
  Kind kind = Kind::MaxEntropy;
  unsigned n = 1;     // MaxEntropy(X_n)
  int symbol = 0;     // DiracFixedPoint
  double p = 0.5;     // Bernoulli(p): probability of symbol 1

  static MeasureSpec max_entropy(unsigned n) { return {Kind::MaxEntropy, n, 0, 0.5}; }
  static MeasureSpec dirac(int symbol) { return {Kind::DiracFixedPoint, 1, symbol, 0.5}; }
  static MeasureSpec bernoulli(double p) { return {Kind::Bernoulli, 1, 0, p}; }
  /// "maxent:2", "dirac:0", "bernoulli:0.5".
  static MeasureSpec parse(std::string_view text);
  [[nodiscard]] std::string to_string() const;
};

/// Certified h_mu + beta * int phi dmu for the given invariant measure, using
/// windows of radius R for phi.
double measure_pressure_lower_bound(const TransitionSchedule& schedule, double beta, const MeasureSpec& measure,
                                    std::size_t radius);
Interval measure_pressure_enclosure(const PotentialEvaluator& evaluator, double beta, const MeasureSpec& measure,
                                    std::size_t radius);

/// Grid points where (v[i+1] - 2 v[i] + v[i-1]) exceeds threshold * step.
/// A run of consecutive flagged points reports its largest second
/// difference only. Throws std::invalid_argument for a non-uniform grid or
/// fewer than 3 samples.
std::vector<double> detect_kinks(std::span<const std::pair<double, double>> samples, double jump_threshold);

struct PressureEstimate {
  double beta = 0.0;
  std::size_t L = 0;
  std::size_t R = 0;
  double upper = 0.0;
  double lower = 0.0;
  unsigned maximizer_n = 0;  // 0 for the fixed-point class
  bool fixed_point = false;
  bool in_domain = true;

  [[nodiscard]] double gap() const { return upper - lower; }
};

/// Upper bound, envelope lower bound and maximizer on every grid point.
/// Points below alpha are flagged out of domain and keep both bounds.
std::vector<PressureEstimate> curve_scan(const TransitionSchedule& schedule, std::span<const Rational> beta_grid,
                                         std::size_t length, std::size_t radius,
                                         const UpperBoundOptions& options = {});

}  // namespace thermoshift
