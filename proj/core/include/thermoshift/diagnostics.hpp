#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "thermoshift/symbolic.hpp"

namespace thermoshift {

struct BlockClass {
  std::size_t j = 0;
  unsigned s = 0;
  friend bool operator==(const BlockClass&, const BlockClass&) = default;
};

struct Block {
  std::size_t start = 0;
  std::size_t length = 0;
  unsigned s = 0;
  friend bool operator==(const Block&, const Block&) = default;
};

/// Greedy left-anchored split of a word into maximal blocks of the union
/// language. pins[k] is the first index whose symbol would make the block
/// that started at the previous pin (or at 0) illegal; `blocks` lists the
/// closed blocks, `tail` the final unpinned one.
struct PinDecomposition {
  BinaryWord word;
  std::vector<std::size_t> pins;
  std::vector<Block> blocks;
  Block tail;

  [[nodiscard]] std::string to_json() const;
};

PinDecomposition pin_positions(const BinaryWord& word);

/// Smallest s in 1..floor(log2 j) - 3 whose language contains the block,
/// or 0 when there is none.
BlockClass classify_block(const BinaryWord& block);

struct CountBoundRow {
  unsigned s = 0;
  std::size_t j = 0;
  std::uint64_t count = 0;
  std::uint64_t bound = 0;
  /// s >= 1 only: 2^s phases times 2 choices for each of the at most
  /// floor(j / 2^s) + 2 blocks a length-j word overlaps.
  std::uint64_t phase_block_bound = 0;
  [[nodiscard]] bool holds() const { return count <= bound; }
};

struct CountBoundReport {
  std::vector<CountBoundRow> rows;
  [[nodiscard]] bool passed() const;
  [[nodiscard]] std::string to_json() const;
};

/// s >= 1: card L_j(X_s) <= 2 * 2^floor(j / 2^s) * 2^s for j = 1..j_max.
/// s == 0: the words of length j in some L(X_t), t >= max(1, floor(log2 j) - 2),
/// number at most 160 j, for each j in `lengths` (1..j_max when empty).
CountBoundReport word_count_bound_check(unsigned s, std::size_t j_max, const std::vector<std::size_t>& lengths = {});

struct KacReport {
  double p = 0.5;
  std::size_t sample_length = 0;
  std::uint64_t seed = 0;
  std::size_t pins = 0;
  bool degenerate = false;
  double pin_density = 0.0;                   // (pins + 1) / length, the anchor counted
  std::map<std::size_t, double> return_law;  // empirical q_j over closed blocks
  double kac_error = 0.0;                     // |sum_j j q_j * density - 1|
  double normalization_error = 0.0;           // |sum_j q_j - 1|

  [[nodiscard]] std::string to_json() const;
};

/// Samples one Bernoulli(p) word with a seeded mt19937_64 (symbol 1 when the
/// 53-bit uniform draw is below p) and checks the return-time identity on
/// its pins.
KacReport kac_check(double p, std::size_t sample_length, std::uint64_t seed);

BinaryWord sample_bernoulli_word(double p, std::size_t length, std::uint64_t seed);

}  // namespace thermoshift
