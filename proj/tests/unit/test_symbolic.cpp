#include <doctest.h>

#include <random>
#include <set>
#include <string>

#include "oracles.hpp"
#include "thermoshift/symbolic.hpp"

using namespace thermoshift;

TEST_SUITE("symbolic") {

TEST_CASE("word encodings round-trip") {
  const BinaryWord w = BinaryWord::from_string("0010111");
  CHECK(w.size() == 7);
  CHECK(w.to_string() == "0010111");
  CHECK(w.to_integer() == 0b0010111);
  CHECK(BinaryWord::from_integer(1, 3).to_string() == "001");
  CHECK(BinaryWord::from_lsb_bits(w.lsb_bits(), 7) == w);
  CHECK(w.slice(2, 3).to_string() == "101");
  CHECK(w.concat(BinaryWord::from_string("10")).to_string() == "001011110");
  CHECK(BinaryWord::from_string("01").repeat(3).to_string() == "010101");
  CHECK_THROWS(BinaryWord::from_string("012"));

  BinaryWord long_word;
  for (int i = 0; i < 150; ++i) long_word.push_back(i % 3 == 0);
  CHECK(long_word.size() == 150);
  CHECK(long_word[147] == 1);
  CHECK(long_word[148] == 0);
}

TEST_CASE("lexicographic order follows integer order") {
  for (std::uint64_t a = 0; a < 32; ++a) {
    for (std::uint64_t b = 0; b < 32; ++b) {
      CHECK(((BinaryWord::from_integer(a, 5) <=> BinaryWord::from_integer(b, 5)) == (a <=> b)));
    }
  }
}

TEST_CASE("generators and entropy") {
  const auto [g0, g1] = generator_words(SubshiftIndex(2));
  CHECK(g0.to_string() == "0001");
  CHECK(g1.to_string() == "1110");
  CHECK(SubshiftIndex(3).entropy() == Rational(1, 8));
  CHECK_THROWS(SubshiftIndex(0));
}

TEST_CASE("membership agrees with brute-force concatenation") {
  for (unsigned n = 1; n <= 3; ++n) {
    for (std::size_t j = 1; j <= 13; ++j) {
      const std::set<std::string> legal = oracle::language(n, j);
      for (std::uint64_t v = 0; v < (std::uint64_t{1} << j); ++v) {
        const BinaryWord w = BinaryWord::from_integer(v, j);
        const bool expected = legal.count(w.to_string()) > 0;
        REQUIRE_MESSAGE(contains_word(SubshiftIndex(n), w) == expected, "n=" << n << " w=" << w.to_string());
        REQUIRE(detail::contains_word_by_blocks(SubshiftIndex(n), w) == expected);
        REQUIRE(detail::contains_word_by_tracker(SubshiftIndex(n), w) == expected);
      }
    }
  }
}

TEST_CASE("enumeration and counts match the oracle") {
  for (unsigned n = 1; n <= 4; ++n) {
    for (std::size_t j = 1; j <= 18; ++j) {
      const std::set<std::string> legal = oracle::language(n, j);
      const std::vector<BinaryWord> words = enumerate_language(SubshiftIndex(n), j);
      REQUIRE(words.size() == legal.size());
      CHECK(count_language(SubshiftIndex(n), j) == legal.size());
      auto it = legal.begin();
      for (const auto& w : words) CHECK(w.to_string() == *it++);
    }
  }
  CHECK_THROWS_AS(enumerate_language(SubshiftIndex(1), 40), SizeLimitError);
}

TEST_CASE("long words use the block route consistently") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const unsigned n = 1 + static_cast<unsigned>(t % 5);
    const std::size_t length = 65 + rng() % 200;
    std::string s = oracle::random_legal_word(rng, n, length);
    CHECK(contains_word(SubshiftIndex(n), BinaryWord::from_string(s)));
    CHECK(detail::contains_word_by_tracker(SubshiftIndex(n), BinaryWord::from_string(s)));
    // Both decision routes must agree on a perturbed word.
    const std::size_t i = rng() % length;
    s[i] = s[i] == '0' ? '1' : '0';
    const BinaryWord flipped = BinaryWord::from_string(s);
    CHECK(detail::contains_word_by_blocks(SubshiftIndex(n), flipped) ==
          detail::contains_word_by_tracker(SubshiftIndex(n), flipped));
  }
}

TEST_CASE("stabilization index") {
  CHECK(stabilization_index(1) == 1);
  CHECK(stabilization_index(2) == 2);
  CHECK(stabilization_index(3) == 3);
  CHECK(stabilization_index(4) == 3);
  CHECK(stabilization_index(5) == 4);
  CHECK(stabilization_index(8) == 4);
  CHECK(stabilization_index(9) == 5);
}

TEST_CASE("languages stop changing at the stabilization index") {
  for (std::size_t j = 1; j <= 12; ++j) {
    const unsigned s = stabilization_index(j);
    const std::set<std::string> at = oracle::language(s, j);
    for (unsigned n = s + 1; n <= s + 2; ++n) CHECK(oracle::language(n, j) == at);
    CHECK(count_language(SubshiftIndex(s), j) == count_language(SubshiftIndex(s + 3), j));
  }
}

TEST_CASE("union language") {
  for (std::size_t j = 1; j <= 11; ++j) {
    std::set<std::string> legal;
    for (unsigned n = 1; n <= stabilization_index(j); ++n) {
      const auto part = oracle::language(n, j);
      legal.insert(part.begin(), part.end());
    }
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << j); ++v) {
      const BinaryWord w = BinaryWord::from_integer(v, j);
      CHECK(union_language_contains(w) == (legal.count(w.to_string()) > 0));
    }
    if (j >= 3) CHECK_THROWS_AS(union_language_contains(BinaryWord(j), 1), std::invalid_argument);
    CHECK(count_union_language(1, stabilization_index(j), j) == legal.size());
  }
}

TEST_CASE("distance exponent is the first illegal central radius") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 400; ++t) {
    const unsigned n = 1 + static_cast<unsigned>(t % 3);
    const std::size_t radius = 1 + rng() % 6;
    const std::string s = (t % 2) ? oracle::random_legal_word(rng, n, 2 * radius + 1)
                                  : oracle::random_word(rng, 2 * radius + 1);
    const CenteredWindow window(BinaryWord::from_string(s), radius);
    std::size_t expected = radius + 1;
    for (std::size_t rho = 1; rho <= radius; ++rho) {
      if (oracle::language(n, 2 * rho + 1).count(s.substr(radius - rho, 2 * rho + 1)) == 0) {
        expected = rho;
        break;
      }
    }
    const DistanceExponent e = distance_exponent(window, SubshiftIndex(n));
    if (expected <= radius) {
      CHECK(e == DistanceExponent::exact(expected));
    } else {
      CHECK(e == DistanceExponent::at_least(radius + 1));
    }
  }
}

TEST_CASE("distance exponent ignores asymmetric overhang") {
  // "11" at the far right sits outside the symmetric radius.
  const CenteredWindow w(BinaryWord::from_string("0101011"), 2);
  CHECK(w.symmetric_radius() == 2);
  CHECK(distance_exponent(w, SubshiftIndex(1)) == DistanceExponent::at_least(3));
}

TEST_CASE("ultrametric consistency: longer windows refine the exponent") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 300; ++t) {
    const unsigned n = 1 + static_cast<unsigned>(t % 4);
    const std::size_t big = 2 + rng() % 20;
    const BinaryWord w = BinaryWord::from_string(oracle::random_word(rng, 2 * big + 1));
    const DistanceExponent outer = distance_exponent(CenteredWindow(w, big), SubshiftIndex(n));
    for (std::size_t r = 1; r < big; ++r) {
      const DistanceExponent inner = distance_exponent(CenteredWindow(w.slice(big - r, 2 * r + 1), r), SubshiftIndex(n));
      if (inner.is_exact()) {
        CHECK(outer == inner);
      } else if (outer.is_exact()) {
        CHECK(outer.value >= inner.value);
      }
    }
  }
}

}  // TEST_SUITE
