#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thermoshift/numeric.hpp"

namespace thermoshift {

/// Thrown when an exhaustive enumeration would exceed its configured cap.
class SizeLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Finite word over {0,1}, bit-packed (symbol i lives in bit i % 64 of
/// block i / 64).
class BinaryWord {
 public:
  BinaryWord() = default;
  explicit BinaryWord(std::size_t length);

  /// Accepts only '0' and '1'.
  static BinaryWord from_string(std::string_view text);
  /// Integer representative, most significant bit first: from_integer(1, 3)
  /// is "001". Ascending integers enumerate words lexicographically.
  static BinaryWord from_integer(std::uint64_t value, std::size_t length);
  /// Bits taken least significant first: symbol i is bit i of `bits`.
  static BinaryWord from_lsb_bits(std::uint64_t bits, std::size_t length);

  [[nodiscard]] std::size_t size() const { return length_; }
  [[nodiscard]] bool empty() const { return length_ == 0; }
  [[nodiscard]] int operator[](std::size_t i) const {
    return static_cast<int>((blocks_[i >> 6U] >> (i & 63U)) & 1U);
  }
  void set(std::size_t i, int symbol);
  void push_back(int symbol);

  [[nodiscard]] BinaryWord slice(std::size_t start, std::size_t length) const;
  [[nodiscard]] BinaryWord concat(const BinaryWord& other) const;
  [[nodiscard]] BinaryWord repeat(std::size_t copies) const;

  [[nodiscard]] std::string to_string() const;
  /// Inverse of from_integer; requires size() <= 64.
  [[nodiscard]] std::uint64_t to_integer() const;
  /// Symbols as bits, least significant first; requires size() <= 64.
  [[nodiscard]] std::uint64_t lsb_bits() const;

  friend bool operator==(const BinaryWord& a, const BinaryWord& b) = default;
  friend std::strong_ordering operator<=>(const BinaryWord& a, const BinaryWord& b);

 private:
  std::vector<std::uint64_t> blocks_;
  std::size_t length_ = 0;
};

/// A word with a marked coordinate 0, standing for the cylinder of all
/// bi-infinite points that agree with it.
class CenteredWindow {
 public:
  CenteredWindow(BinaryWord word, std::size_t origin);

  [[nodiscard]] const BinaryWord& word() const { return word_; }
  [[nodiscard]] std::size_t origin() const { return origin_; }
  [[nodiscard]] std::size_t left_radius() const { return origin_; }
  [[nodiscard]] std::size_t right_radius() const { return word_.size() - 1 - origin_; }
  [[nodiscard]] std::size_t symmetric_radius() const { return std::min(left_radius(), right_radius()); }
  /// Symbol at coordinate `offset` relative to the origin.
  [[nodiscard]] int at(long offset) const { return word_[static_cast<std::size_t>(static_cast<long>(origin_) + offset)]; }
  /// The word on coordinates [-radius, radius].
  [[nodiscard]] BinaryWord central_word(std::size_t radius) const;

 private:
  BinaryWord word_;
  std::size_t origin_;
};

inline constexpr unsigned kMaxSubshiftIndex = 62;

/// Index n of the coded subshift X_n generated by 0^{2^n-1}1 and 1^{2^n-1}0.
class SubshiftIndex {
 public:
  explicit SubshiftIndex(unsigned n);
  [[nodiscard]] unsigned value() const { return n_; }
  [[nodiscard]] std::uint64_t block_length() const { return std::uint64_t{1} << n_; }
  /// h_n = 2^{-n}.
  [[nodiscard]] Rational entropy() const { return pow2(-static_cast<long>(n_)); }
  friend auto operator<=>(const SubshiftIndex&, const SubshiftIndex&) = default;

 private:
  unsigned n_;
};

/// Exponent j of dist(x, X_n) = 2^{-j}: exact over the whole cylinder, or
/// only bounded below when the window is too short to see the first defect.
struct DistanceExponent {
  enum class Kind { Exact, AtLeast };
  Kind kind;
  std::size_t value;

  static DistanceExponent exact(std::size_t j) { return {Kind::Exact, j}; }
  static DistanceExponent at_least(std::size_t r) { return {Kind::AtLeast, r}; }
  [[nodiscard]] bool is_exact() const { return kind == Kind::Exact; }
  friend bool operator==(const DistanceExponent&, const DistanceExponent&) = default;
};

std::string to_string(const DistanceExponent& e);

std::pair<BinaryWord, BinaryWord> generator_words(SubshiftIndex n);

/// Membership of w in the language of X_n.
bool contains_word(SubshiftIndex n, const BinaryWord& w);

/// Smallest n with 2^{n-1} >= length. Beyond it the length-`length` language
/// of X_n no longer depends on n.
unsigned stabilization_index(std::size_t length);

/// Membership in the union of the languages of X_1..X_{n_probe}, which is the
/// language of the closure Y of the union once n_probe reaches the
/// stabilization index. Throws std::invalid_argument below that index.
bool union_language_contains(const BinaryWord& w, unsigned n_probe);
bool union_language_contains(const BinaryWord& w);

struct EnumerationLimits {
  std::size_t max_length = 26;
};

/// Length-j words of the language of X_n, in ascending integer order.
std::vector<BinaryWord> enumerate_language(SubshiftIndex n, std::size_t j, const EnumerationLimits& limits = {});
std::uint64_t count_language(SubshiftIndex n, std::size_t j, const EnumerationLimits& limits = {});

/// Counts length-j words lying in the language of X_t for some t in
/// [t_min, t_max].
std::uint64_t count_union_language(unsigned t_min, unsigned t_max, std::size_t j,
                                   const EnumerationLimits& limits = {});

DistanceExponent distance_exponent(const CenteredWindow& window, SubshiftIndex n);

/// Incremental consistency of a growing word with the block phases of X_n.
///
/// Feed the adjacent pairs (k-1, k) of a word, each extending the observed
/// coordinate range by one at either end; any() reports whether some phase
/// of the block grid still explains every observed pair. A change of symbol
/// at k is legal only on a marker (k) or a block start (k-1 a marker); an
/// unchanged pair is illegal on a marker.
class PhaseTracker {
 public:
  explicit PhaseTracker(SubshiftIndex n);

  void observe(long k, bool changed);
  [[nodiscard]] bool any() const;

 private:
  [[nodiscard]] std::uint64_t residue(long k) const;
  [[nodiscard]] bool killed_by_range(std::uint64_t r) const;

  std::uint64_t period_;
  bool have_range_ = false;
  long lo_ = 0;
  long hi_ = 0;
  bool restricted_ = false;
  std::uint64_t alive_[2] = {0, 0};
  int alive_count_ = 0;
};

namespace detail {
/// Phase-by-phase block scan; the reference route behind contains_word for
/// words longer than 64 symbols.
bool contains_word_by_blocks(SubshiftIndex n, const BinaryWord& w);
/// Same decision through PhaseTracker.
bool contains_word_by_tracker(SubshiftIndex n, const BinaryWord& w);
}  // namespace detail

}  // namespace thermoshift
