#include "thermoshift/diagnostics.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "json_util.hpp"

namespace thermoshift {

namespace {

unsigned floor_log2(std::size_t j) { return static_cast<unsigned>(std::bit_width(j) - 1); }

// Union-language membership of a block grown one symbol at a time: one
// tracker per subshift index up to the current stabilization index.
class GrowingBlock {
 public:
  GrowingBlock(const BinaryWord& word, std::size_t start) : word_(&word), start_(start) {}

  // Extends the block by word[start + length] and reports whether it stays legal.
  bool extend() {
    const std::size_t k = length_;  // relative coordinate of the new symbol
    ++length_;
    const unsigned needed = stabilization_index(length_);
    while (trackers_.size() < needed) {
      PhaseTracker t(SubshiftIndex(static_cast<unsigned>(trackers_.size() + 1)));
      for (std::size_t q = 1; q < k; ++q) t.observe(static_cast<long>(q), changed(q));
      trackers_.push_back(t);
    }
    bool legal = false;
    for (PhaseTracker& t : trackers_) {
      if (k >= 1 && t.any()) t.observe(static_cast<long>(k), changed(k));
      legal = legal || t.any();
    }
    return legal;
  }

 private:
  [[nodiscard]] bool changed(std::size_t q) const { return (*word_)[start_ + q] != (*word_)[start_ + q - 1]; }

  const BinaryWord* word_;
  std::size_t start_;
  std::size_t length_ = 0;
  std::vector<PhaseTracker> trackers_;
};

}  // namespace

PinDecomposition pin_positions(const BinaryWord& word) {
  if (word.empty()) throw std::invalid_argument("pin decomposition needs a non-empty word");
  PinDecomposition out;
  out.word = word;
  std::size_t start = 0;
  GrowingBlock block(word, start);
  block.extend();
  for (std::size_t i = start + 1; i < word.size(); ++i) {
    if (!block.extend()) {
      out.pins.push_back(i);
      const std::size_t len = i - start;
      out.blocks.push_back({start, len, classify_block(word.slice(start, len)).s});
      start = i;
      block = GrowingBlock(word, start);
      block.extend();
    }
  }
  const std::size_t len = word.size() - start;
  out.tail = {start, len, classify_block(word.slice(start, len)).s};
  return out;
}

BlockClass classify_block(const BinaryWord& block) {
  if (block.empty()) throw std::invalid_argument("cannot classify an empty block");
  const std::size_t j = block.size();
  const unsigned log_j = floor_log2(j);
  for (unsigned s = 1; s + 3 <= log_j; ++s) {
    if (contains_word(SubshiftIndex(s), block)) return {j, s};
  }
  return {j, 0};
}

bool CountBoundReport::passed() const {
  for (const auto& r : rows) {
    if (!r.holds()) return false;
  }
  return true;
}

CountBoundReport word_count_bound_check(unsigned s, std::size_t j_max, const std::vector<std::size_t>& lengths) {
  if (j_max < 1) throw std::invalid_argument("count bound check needs j_max >= 1");
  std::vector<std::size_t> js = lengths;
  if (js.empty()) {
    for (std::size_t j = 1; j <= j_max; ++j) js.push_back(j);
  }
  CountBoundReport report;
  for (std::size_t j : js) {
    if (j < 1 || j > j_max) throw std::invalid_argument("count bound length outside [1, j_max]");
    CountBoundRow row;
    row.s = s;
    row.j = j;
    if (s >= 1) {
      const std::size_t block = std::size_t{1} << s;
      row.count = count_language(SubshiftIndex(s), j);
      row.bound = std::uint64_t{2} << (j / block + s);
      row.phase_block_bound = std::uint64_t{1} << (j / block + s + 2);
    } else {
      const unsigned log_j = floor_log2(j);
      const unsigned t_min = log_j >= 3 ? log_j - 2 : 1;
      // The union over t >= t_min stops growing at the stabilization index.
      const unsigned t_max = std::max(t_min, stabilization_index(j));
      row.count = count_union_language(t_min, t_max, j);
      row.bound = 160 * static_cast<std::uint64_t>(j);
    }
    report.rows.push_back(row);
  }
  return report;
}

std::string CountBoundReport::to_json() const {
  detail::json doc;
  doc["passed"] = passed();
  auto& list = doc["rows"] = detail::json::array();
  for (const auto& r : rows) {
    list.push_back({{"s", r.s}, {"j", r.j}, {"count", r.count}, {"bound", r.bound}, {"holds", r.holds()}});
    if (r.s >= 1) list.back()["phase_block_bound"] = r.phase_block_bound;
  }
  return doc.dump(2);
}

std::string PinDecomposition::to_json() const {
  detail::json doc;
  doc["word"] = word.to_string();
  doc["pins"] = pins;
  auto& list = doc["blocks"] = detail::json::array();
  for (const auto& b : blocks) list.push_back({{"start", b.start}, {"j", b.length}, {"s", b.s}});
  doc["tail"] = {{"start", tail.start}, {"j", tail.length}, {"s", tail.s}};
  return doc.dump(2);
}

BinaryWord sample_bernoulli_word(double p, std::size_t length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  BinaryWord word(length);
  for (std::size_t i = 0; i < length; ++i) {
    const double u = static_cast<double>(rng() >> 11U) * 0x1p-53;
    word.set(i, u < p ? 1 : 0);
  }
  return word;
}

KacReport kac_check(double p, std::size_t sample_length, std::uint64_t seed) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("Kac check needs 0 < p < 1");
  if (sample_length < 10000) throw std::invalid_argument("Kac check needs a sample of at least 10^4 symbols");
  KacReport report;
  report.p = p;
  report.sample_length = sample_length;
  report.seed = seed;
  const PinDecomposition pins = pin_positions(sample_bernoulli_word(p, sample_length, seed));
  report.pins = pins.pins.size();
  report.pin_density = static_cast<double>(report.pins + 1) / static_cast<double>(sample_length);
  if (pins.blocks.empty()) {
    report.degenerate = true;
    report.kac_error = std::numeric_limits<double>::quiet_NaN();
    report.normalization_error = std::numeric_limits<double>::quiet_NaN();
    return report;
  }
  std::map<std::size_t, std::size_t> counts;
  for (const Block& b : pins.blocks) ++counts[b.length];
  const double total = static_cast<double>(pins.blocks.size());
  std::size_t seen = 0;
  double mean = 0.0;
  for (const auto& [j, c] : counts) {
    const double q = static_cast<double>(c) / total;
    report.return_law[j] = q;
    seen += c;
    mean += static_cast<double>(j) * q;
  }
  const double mass = static_cast<double>(seen) / total;
  report.kac_error = std::abs(mean * report.pin_density - 1.0);
  report.normalization_error = std::abs(mass - 1.0);
  return report;
}

std::string KacReport::to_json() const {
  detail::json doc;
  doc["p"] = p;
  doc["sample_length"] = sample_length;
  doc["seed"] = seed;
  doc["pins"] = pins;
  doc["degenerate"] = degenerate;
  doc["pin_density"] = pin_density;
  if (!degenerate) {
    doc["kac_error"] = kac_error;
    doc["normalization_error"] = normalization_error;
    auto& law = doc["return_law"] = detail::json::object();
    for (const auto& [j, q] : return_law) law[std::to_string(j)] = q;
  }
  return doc.dump(2);
}

}  // namespace thermoshift
