#include "thermoshift/symbolic.hpp"

#include <algorithm>
#include <bit>

namespace thermoshift {

BinaryWord::BinaryWord(std::size_t length) : blocks_((length + 63) / 64, 0), length_(length) {}

BinaryWord BinaryWord::from_string(std::string_view text) {
  BinaryWord w(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '0' && text[i] != '1') {
      throw std::invalid_argument("binary word contains non-binary character '" + std::string(1, text[i]) + "'");
    }
    w.set(i, text[i] - '0');
  }
  return w;
}

BinaryWord BinaryWord::from_integer(std::uint64_t value, std::size_t length) {
  if (length > 64) throw std::invalid_argument("integer representative limited to 64 symbols");
  BinaryWord w(length);
  for (std::size_t i = 0; i < length; ++i) {
    w.set(i, static_cast<int>((value >> (length - 1 - i)) & 1U));
  }
  return w;
}

BinaryWord BinaryWord::from_lsb_bits(std::uint64_t bits, std::size_t length) {
  if (length > 64) throw std::invalid_argument("bit representative limited to 64 symbols");
  BinaryWord w(length);
  if (length > 0) w.blocks_[0] = length == 64 ? bits : bits & ((std::uint64_t{1} << length) - 1);
  return w;
}

void BinaryWord::set(std::size_t i, int symbol) {
  const std::uint64_t mask = std::uint64_t{1} << (i & 63U);
  if (symbol != 0) {
    blocks_[i >> 6U] |= mask;
  } else {
    blocks_[i >> 6U] &= ~mask;
  }
}

void BinaryWord::push_back(int symbol) {
  if ((length_ & 63U) == 0) blocks_.push_back(0);
  ++length_;
  set(length_ - 1, symbol);
}

BinaryWord BinaryWord::slice(std::size_t start, std::size_t length) const {
  if (start + length > length_) throw std::out_of_range("slice past end of word");
  BinaryWord out(length);
  for (std::size_t i = 0; i < length; ++i) out.set(i, (*this)[start + i]);
  return out;
}

BinaryWord BinaryWord::concat(const BinaryWord& other) const {
  BinaryWord out = *this;
  for (std::size_t i = 0; i < other.size(); ++i) out.push_back(other[i]);
  return out;
}

BinaryWord BinaryWord::repeat(std::size_t copies) const {
  BinaryWord out;
  for (std::size_t c = 0; c < copies; ++c) out = out.concat(*this);
  return out;
}

std::string BinaryWord::to_string() const {
  std::string s(length_, '0');
  for (std::size_t i = 0; i < length_; ++i) s[i] = static_cast<char>('0' + (*this)[i]);
  return s;
}

std::uint64_t BinaryWord::to_integer() const {
  if (length_ > 64) throw std::invalid_argument("integer representative limited to 64 symbols");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < length_; ++i) v = (v << 1U) | static_cast<std::uint64_t>((*this)[i]);
  return v;
}

std::uint64_t BinaryWord::lsb_bits() const {
  if (length_ > 64) throw std::invalid_argument("bit representative limited to 64 symbols");
  return length_ == 0 ? 0 : blocks_[0];
}

std::strong_ordering operator<=>(const BinaryWord& a, const BinaryWord& b) {
  if (auto c = a.length_ <=> b.length_; c != 0) return c;
  for (std::size_t i = 0; i < a.length_; ++i) {
    if (auto c = a[i] <=> b[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

CenteredWindow::CenteredWindow(BinaryWord word, std::size_t origin) : word_(std::move(word)), origin_(origin) {
  if (word_.empty()) throw std::invalid_argument("window needs at least one symbol");
  if (origin_ >= word_.size()) throw std::invalid_argument("window origin outside the word");
}

BinaryWord CenteredWindow::central_word(std::size_t radius) const {
  if (radius > symmetric_radius()) throw std::out_of_range("central word exceeds the symmetric radius");
  return word_.slice(origin_ - radius, 2 * radius + 1);
}

SubshiftIndex::SubshiftIndex(unsigned n) : n_(n) {
  if (n < 1 || n > kMaxSubshiftIndex) {
    throw std::invalid_argument("subshift index must lie in [1, " + std::to_string(kMaxSubshiftIndex) + "]");
  }
}

std::string to_string(const DistanceExponent& e) {
  return (e.is_exact() ? "Exact(" : "AtLeast(") + std::to_string(e.value) + ")";
}

std::pair<BinaryWord, BinaryWord> generator_words(SubshiftIndex n) {
  const std::uint64_t b = n.block_length();
  if (b > (std::uint64_t{1} << 24U)) throw SizeLimitError("generator words too long to materialise");
  BinaryWord zero_run(b);
  BinaryWord one_run(b);
  for (std::uint64_t i = 0; i + 1 < b; ++i) one_run.set(i, 1);
  zero_run.set(b - 1, 1);
  return {zero_run, one_run};
}

namespace {

// Number of phases that can differ on a word of this length: with a block
// longer than the word, only "marker at p" (p < length) and "no marker" matter.
std::uint64_t effective_phases(SubshiftIndex n, std::size_t length) {
  return std::min<std::uint64_t>(n.block_length(), static_cast<std::uint64_t>(length) + 1);
}

// Word of at most 64 symbols held as LSB-first bits. For phase m, markers sit
// at positions p = m (mod B). Legal iff every adjacent pair (k-1, k) whose
// left symbol is not a marker changes exactly when k is a marker.
bool contains_short(SubshiftIndex n, std::uint64_t bits, std::size_t length) {
  if (length <= 1) return true;
  const std::uint64_t pair_mask = (length == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << length) - 1)) & ~std::uint64_t{1};
  const std::uint64_t changes = (bits ^ (bits << 1U)) & pair_mask;
  const std::uint64_t b = n.block_length();
  const std::uint64_t phases = effective_phases(n, length);
  for (std::uint64_t m = 0; m < phases; ++m) {
    std::uint64_t markers = 0;
    for (std::uint64_t p = m; p < length; p += b) {
      markers |= std::uint64_t{1} << p;
      if (b >= 64) break;
    }
    const std::uint64_t block_starts = markers << 1U;
    if (((changes ^ markers) & ~block_starts & pair_mask) == 0) return true;
  }
  return false;
}

}  // namespace

namespace detail {

bool contains_word_by_blocks(SubshiftIndex n, const BinaryWord& w) {
  const std::size_t len = w.size();
  if (len <= 1) return true;
  const std::uint64_t b = n.block_length();
  const std::uint64_t phases = effective_phases(n, len);
  for (std::uint64_t m = 0; m < phases; ++m) {
    // Blocks end on markers. A block of type t reads t on its run positions
    // and 1-t on its marker, so symbol XOR marker-flag must be constant on
    // the block; partial blocks at either end are unconstrained otherwise.
    bool ok = true;
    std::size_t pos = 0;
    while (ok && pos < len) {
      std::uint64_t offset = (static_cast<std::uint64_t>(pos) + b - (m % b) + b - 1) % b;  // 0 .. B-1 within block
      std::uint64_t remaining = b - offset;  // symbols up to and including this block's marker
      const std::size_t end = static_cast<std::size_t>(std::min<std::uint64_t>(len, pos + remaining));
      int type = -1;
      for (std::size_t i = pos; i < end; ++i) {
        const bool is_marker = (i + 1 == pos + remaining);
        const int t = w[i] ^ static_cast<int>(is_marker);
        if (type < 0) {
          type = t;
        } else if (t != type) {
          ok = false;
          break;
        }
      }
      pos = end;
    }
    if (ok) return true;
  }
  return false;
}

bool contains_word_by_tracker(SubshiftIndex n, const BinaryWord& w) {
  PhaseTracker tracker(n);
  for (std::size_t k = 1; k < w.size(); ++k) {
    tracker.observe(static_cast<long>(k), w[k] != w[k - 1]);
    if (!tracker.any()) return false;
  }
  return true;
}

}  // namespace detail

bool contains_word(SubshiftIndex n, const BinaryWord& w) {
  if (w.empty()) throw std::invalid_argument("membership requires a non-empty word");
  if (w.size() <= 64) return contains_short(n, w.lsb_bits(), w.size());
  return detail::contains_word_by_blocks(n, w);
}

unsigned stabilization_index(std::size_t length) {
  unsigned n = 1;
  while ((std::uint64_t{1} << (n - 1)) < length) ++n;
  return n;
}

bool union_language_contains(const BinaryWord& w, unsigned n_probe) {
  if (w.empty()) throw std::invalid_argument("membership requires a non-empty word");
  const unsigned needed = stabilization_index(w.size());
  if (n_probe < needed) {
    throw std::invalid_argument("n_probe " + std::to_string(n_probe) + " below stabilization index " +
                                std::to_string(needed) + " for length " + std::to_string(w.size()));
  }
  for (unsigned n = 1; n <= std::min(n_probe, kMaxSubshiftIndex); ++n) {
    if (contains_word(SubshiftIndex(n), w)) return true;
  }
  return false;
}

bool union_language_contains(const BinaryWord& w) { return union_language_contains(w, stabilization_index(w.size())); }

namespace {

void check_length(std::size_t j, const EnumerationLimits& limits) {
  if (j < 1) throw std::invalid_argument("word length must be at least 1");
  if (j > limits.max_length || j > 63) {
    throw SizeLimitError("enumeration length " + std::to_string(j) + " exceeds cap " +
                         std::to_string(std::min<std::size_t>(limits.max_length, 63)));
  }
}

}  // namespace

std::vector<BinaryWord> enumerate_language(SubshiftIndex n, std::size_t j, const EnumerationLimits& limits) {
  check_length(j, limits);
  std::vector<BinaryWord> out;
  const std::uint64_t total = std::uint64_t{1} << j;
  for (std::uint64_t v = 0; v < total; ++v) {
    BinaryWord w = BinaryWord::from_integer(v, j);
    if (contains_short(n, w.lsb_bits(), j)) out.push_back(std::move(w));
  }
  return out;
}

std::uint64_t count_language(SubshiftIndex n, std::size_t j, const EnumerationLimits& limits) {
  check_length(j, limits);
  // Bit order is irrelevant for counting: iterate LSB-first representatives.
  const std::uint64_t total = std::uint64_t{1} << j;
  std::uint64_t count = 0;
  for (std::uint64_t bits = 0; bits < total; ++bits) count += contains_short(n, bits, j) ? 1 : 0;
  return count;
}

std::uint64_t count_union_language(unsigned t_min, unsigned t_max, std::size_t j, const EnumerationLimits& limits) {
  check_length(j, limits);
  if (t_min < 1 || t_min > t_max) throw std::invalid_argument("empty subshift index range");
  t_max = std::min(t_max, kMaxSubshiftIndex);
  const std::uint64_t total = std::uint64_t{1} << j;
  std::uint64_t count = 0;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    for (unsigned t = t_min; t <= t_max; ++t) {
      if (contains_short(SubshiftIndex(t), bits, j)) {
        ++count;
        break;
      }
    }
  }
  return count;
}

PhaseTracker::PhaseTracker(SubshiftIndex n) : period_(n.block_length()) {}

std::uint64_t PhaseTracker::residue(long k) const {
  const auto p = static_cast<long long>(period_);
  long long r = static_cast<long long>(k) % p;
  if (r < 0) r += p;
  return static_cast<std::uint64_t>(r);
}

bool PhaseTracker::killed_by_range(std::uint64_t r) const {
  if (!have_range_) return false;
  const auto span = static_cast<std::uint64_t>(hi_ - lo_) + 1;
  if (span >= period_) return true;
  return (r + period_ - residue(lo_)) % period_ < span;
}

void PhaseTracker::observe(long k, bool changed) {
  if (!restricted_) {
    if (changed) {
      alive_count_ = 0;
      for (std::uint64_t r : {residue(k), residue(k - 1)}) {
        if (!killed_by_range(r)) alive_[alive_count_++] = r;
      }
      restricted_ = true;
    }
    // Unchanged pairs seen so far form one contiguous coordinate range; each
    // kills the phase with a marker at its right coordinate.
    if (!have_range_) {
      lo_ = hi_ = k;
      have_range_ = true;
    } else if (k == hi_ + 1) {
      hi_ = k;
    } else if (k == lo_ - 1) {
      lo_ = k;
    } else {
      throw std::logic_error("PhaseTracker pairs must extend the observed range contiguously");
    }
    return;
  }
  int kept = 0;
  for (int i = 0; i < alive_count_; ++i) {
    const std::uint64_t m = alive_[i];
    const bool marker_here = residue(k) == m;
    const bool block_start = residue(k - 1) == m;
    const bool ok = changed ? (marker_here || block_start) : !marker_here;
    if (ok) alive_[kept++] = m;
  }
  alive_count_ = kept;
}

bool PhaseTracker::any() const {
  if (restricted_) return alive_count_ > 0;
  if (!have_range_) return true;
  return static_cast<std::uint64_t>(hi_ - lo_) + 1 < period_;
}

DistanceExponent distance_exponent(const CenteredWindow& window, SubshiftIndex n) {
  // Grow the central word one coordinate per side; the pair (k-1, k) enters
  // the central word of radius max(1-k, k).
  const std::size_t radius = window.symmetric_radius();
  PhaseTracker tracker(n);
  for (std::size_t rho = 1; rho <= radius; ++rho) {
    const long right = static_cast<long>(rho);
    const long left = 1 - static_cast<long>(rho);
    tracker.observe(right, window.at(right) != window.at(right - 1));
    tracker.observe(left, window.at(left) != window.at(left - 1));
    if (!tracker.any()) return DistanceExponent::exact(rho);
  }
  return DistanceExponent::at_least(radius + 1);
}

}  // namespace thermoshift
