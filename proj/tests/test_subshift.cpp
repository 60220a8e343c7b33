#include <catch2/catch.hpp>

#include <algorithm>
#include <random>

#include "cjsr/subshift.hpp"
#include "oracles.hpp"

using cjsr::SignMatrix;
using cjsr::Word;
using cjsr::WordMode;

namespace {
const SignMatrix kAlternating = SignMatrix::from_grid({{0, 1}, {1, 0}});
const SignMatrix kThreeCycle = SignMatrix::from_grid({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
}  // namespace

TEST_CASE("sign matrix validation") {
  CHECK_NOTHROW(SignMatrix::from_grid({{0, 1}, {1, 0}}));
  CHECK_NOTHROW(SignMatrix::from_grid({{1}}));

  try {
    SignMatrix::from_grid({{0, 0}, {1, 1}});
    FAIL("expected rejection of the empty first row");
  } catch (const cjsr::invalid_input& e) {
    CHECK(std::string(e.what()).find("row 1") != std::string::npos);
  }
  CHECK_THROWS_AS(SignMatrix::from_grid({{0, 2}, {1, 0}}), cjsr::invalid_input);
  CHECK_THROWS_AS(SignMatrix::from_grid({{1, 0}, {1}}), cjsr::invalid_input);
}

TEST_CASE("admissibility") {
  CHECK(is_admissible({0, 1}, kAlternating));
  CHECK_FALSE(is_admissible({0, 0}, kAlternating));
  CHECK(is_admissible({0}, kAlternating));  // length 1 by convention
  const SignMatrix full = SignMatrix::full(3);
  CHECK(is_admissible({2, 0, 1, 1, 2}, full));
  CHECK_THROWS_AS(is_admissible({}, kAlternating), cjsr::invalid_input);
  CHECK_THROWS_AS(is_admissible({5}, kAlternating), cjsr::invalid_input);
}

TEST_CASE("periodic extendability") {
  CHECK(is_periodically_extendable({0, 1}, kAlternating));
  CHECK_FALSE(is_periodically_extendable({0}, kAlternating));  // no self-loop
  CHECK(is_periodically_extendable({0, 1, 2}, kThreeCycle));
  CHECK_FALSE(is_periodically_extendable({0, 1, 0}, kAlternating));  // wrap 0->0 forbidden
}

TEST_CASE("enumeration on the alternating graph") {
  const auto periodic2 = enumerate_words(kAlternating, 2, WordMode::periodic);
  REQUIRE(periodic2.size() == 2);
  CHECK(periodic2[0] == Word{0, 1});
  CHECK(periodic2[1] == Word{1, 0});

  // odd cycles are impossible in a bipartite graph; confirm against the
  // brute-force filter over all 8 words
  CHECK(enumerate_words(kAlternating, 3, WordMode::periodic).empty());
  CHECK(oracles::filtered_words(2, 3, [&](const Word& w) {
          return is_periodically_extendable(w, kAlternating);
        }).empty());

  CHECK(enumerate_words(SignMatrix::full(2), 2, WordMode::free_words).size() == 4);
}

TEST_CASE("enumeration agrees with brute-force filtering") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t k = 1 + rng() % 4;
    const SignMatrix sign = oracles::random_sign(rng, k);
    for (std::size_t n = 1; n <= (k == 4 ? 6u : 8u); ++n) {
      const auto adm = enumerate_words(sign, n, WordMode::admissible);
      const auto per = enumerate_words(sign, n, WordMode::periodic);
      const auto fre = enumerate_words(sign, n, WordMode::free_words);
      CHECK(adm == oracles::filtered_words(static_cast<int>(k), n, [&](const Word& w) {
              return is_admissible(w, sign);
            }));
      CHECK(per == oracles::filtered_words(static_cast<int>(k), n, [&](const Word& w) {
              return is_periodically_extendable(w, sign);
            }));
      CHECK(fre.size() == static_cast<std::size_t>(std::pow(k, n)));
      // subset chain: periodic within admissible within free
      CHECK(std::includes(adm.begin(), adm.end(), per.begin(), per.end()));
      CHECK(std::includes(fre.begin(), fre.end(), adm.begin(), adm.end()));
      // lexicographic output order
      CHECK(std::is_sorted(adm.begin(), adm.end()));
    }
  }
}

TEST_CASE("periodic extendability equals admissibility of the wrapped word") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t k = 1 + rng() % 4;
    const SignMatrix sign = oracles::random_sign(rng, k);
    for (std::size_t n = 1; n <= 7; ++n) {
      for (const Word& w : oracles::all_words(static_cast<int>(k), n)) {
        Word wrapped = w;
        wrapped.push_back(w.front());
        CHECK(is_periodically_extendable(w, sign) == is_admissible(wrapped, sign));
      }
      if (std::pow(k, n) > 20000) break;
    }
  }
}

TEST_CASE("cyclic rotations of periodically extendable words stay periodically extendable") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t k = 2 + rng() % 3;
    const SignMatrix sign = oracles::random_sign(rng, k);
    for (std::size_t n = 1; n <= 7; ++n) {
      for (const Word& w : enumerate_words(sign, n, WordMode::periodic)) {
        Word rot = w;
        for (std::size_t r = 1; r < n; ++r) {
          std::rotate(rot.begin(), rot.begin() + 1, rot.end());
          CHECK(is_periodically_extendable(rot, sign));
        }
      }
    }
  }
}

TEST_CASE("transfer-matrix counting") {
  CHECK(count_admissible(kAlternating, 5).value == 2);
  CHECK_FALSE(count_admissible(kAlternating, 5).saturated);
  CHECK(count_admissible(SignMatrix::full(3), 4).value == 81);
  CHECK(count_admissible(kThreeCycle, 1).value == 3);

  SECTION("matches the enumerator") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 8; ++trial) {
      const std::size_t k = 1 + rng() % 4;
      const SignMatrix sign = oracles::random_sign(rng, k);
      for (std::size_t n = 1; n <= 10; ++n) {
        const auto count = count_admissible(sign, n);
        REQUIRE_FALSE(count.saturated);
        CHECK(count.value == enumerate_words(sign, n, WordMode::admissible).size());
      }
    }
  }

  SECTION("saturates instead of overflowing") {
    const auto c = count_admissible(SignMatrix::full(2), 70);
    CHECK(c.saturated);
    CHECK(c.value == UINT64_MAX);
  }
}

TEST_CASE("irreducibility") {
  CHECK(is_irreducible(kAlternating));
  CHECK(is_irreducible(kThreeCycle));
  CHECK_FALSE(is_irreducible(SignMatrix::from_grid({{1, 1}, {0, 1}})));
  CHECK(is_irreducible(SignMatrix::from_grid({{1}})));
}

TEST_CASE("prefix walk visits every length up to the maximum") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t k = 1 + rng() % 4;
    const SignMatrix sign = oracles::random_sign(rng, k);
    for (WordMode mode : {WordMode::admissible, WordMode::periodic, WordMode::free_words}) {
      std::vector<Word> walked;
      for_each_word_up_to(sign, 4, mode, [&](const Word& w) { walked.push_back(w); });
      std::vector<Word> expected;
      for (std::size_t n = 1; n <= 4; ++n)
        for (Word& w : enumerate_words(sign, n, mode)) expected.push_back(std::move(w));
      std::sort(expected.begin(), expected.end());
      std::vector<Word> sorted = walked;
      std::sort(sorted.begin(), sorted.end());
      CHECK(sorted == expected);
      // admissible prefixes are admissible, so they precede their
      // extensions in the walk; periodic words may lack visited prefixes
      if (mode != WordMode::periodic) {
        for (std::size_t i = 0; i + 1 < walked.size(); ++i)
          if (walked[i + 1].size() > walked[i].size())
            CHECK(std::equal(walked[i].begin(), walked[i].end(), walked[i + 1].begin()));
      }
    }
  }
}

TEST_CASE("enumeration cap reports the yield so far") {
  try {
    enumerate_words(SignMatrix::full(3), 8, WordMode::free_words, cjsr::EnumLimit{50});
    FAIL("expected enumeration_limit");
  } catch (const cjsr::enumeration_limit& e) {
    CHECK(e.produced <= 50);
  }
}
