#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cjsr/error.hpp"

namespace cjsr {

/// A finite switching word. Symbols are 0-based indices into the state set;
/// the serialized (file/report) form is 1-based, converted at the I/O
/// boundary.
using Word = std::vector<int>;

/// K x K {0,1} transition sign matrix. Valid instances have at least one 1
/// per row, so every state has an outgoing transition and infinite paths
/// never die.
class SignMatrix {
 public:
  SignMatrix(std::size_t k, std::vector<std::uint8_t> bits)
      : k_(k), bits_(std::move(bits)) {
    if (k_ == 0) throw invalid_input("sign matrix must be at least 1x1");
    if (bits_.size() != k_ * k_) throw invalid_input("sign matrix bits do not match size");
    for (std::uint8_t b : bits_)
      if (b > 1) throw invalid_input("sign matrix entries must be 0 or 1");
    for (std::size_t i = 0; i < k_; ++i) {
      bool any = false;
      for (std::size_t j = 0; j < k_; ++j) any = any || bits_[i * k_ + j];
      if (!any)
        throw invalid_input("sign matrix row " + std::to_string(i + 1) + " has no 1 entry");
    }
  }

  /// Validating constructor from a raw integer grid (row condition and
  /// {0,1} entries enforced).
  static SignMatrix from_grid(const std::vector<std::vector<int>>& grid) {
    const std::size_t k = grid.size();
    std::vector<std::uint8_t> bits;
    bits.reserve(k * k);
    for (const auto& row : grid) {
      if (row.size() != k) throw invalid_input("sign matrix must be square");
      for (int v : row) {
        if (v != 0 && v != 1) throw invalid_input("sign matrix entries must be 0 or 1");
        bits.push_back(static_cast<std::uint8_t>(v));
      }
    }
    return SignMatrix(k, std::move(bits));
  }

  static SignMatrix full(std::size_t k) {
    return SignMatrix(k, std::vector<std::uint8_t>(k * k, 1));
  }

  std::size_t size() const { return k_; }
  bool allows(int from, int to) const {
    return bits_[static_cast<std::size_t>(from) * k_ + static_cast<std::size_t>(to)] != 0;
  }

  friend bool operator==(const SignMatrix&, const SignMatrix&) = default;

 private:
  std::size_t k_;
  std::vector<std::uint8_t> bits_;
};

inline void check_word_symbols(const Word& word, const SignMatrix& sign) {
  for (int s : word)
    if (s < 0 || static_cast<std::size_t>(s) >= sign.size())
      throw invalid_input("word symbol out of range");
}

/// Every adjacent transition allowed. Words of length 1 are admissible by
/// convention, so that length-1 periodically extendable words are exactly
/// the self-loops.
inline bool is_admissible(const Word& word, const SignMatrix& sign) {
  if (word.empty()) throw invalid_input("admissibility is defined for nonempty words");
  check_word_symbols(word, sign);
  for (std::size_t t = 0; t + 1 < word.size(); ++t)
    if (!sign.allows(word[t], word[t + 1])) return false;
  return true;
}

/// Admissible and the wrap-around transition (last -> first) is allowed;
/// equivalently, appending the first symbol keeps the word admissible.
inline bool is_periodically_extendable(const Word& word, const SignMatrix& sign) {
  if (word.empty()) throw invalid_input("periodic extendability is defined for nonempty words");
  return is_admissible(word, sign) && sign.allows(word.back(), word.front());
}

enum class WordMode { admissible, periodic, free_words };

struct EnumLimit {
  std::uint64_t max_nodes = 10'000'000;
};

namespace detail {

/// Depth-first walk over the word tree in lexicographic order, pruning at
/// the first forbidden edge (admissible/periodic modes, whose words are
/// all admissible). Visits every word with min_len <= length <= max_len
/// that satisfies the mode predicate; prefixes are visited before their
/// extensions.
template <class Fn>
void walk_words(const SignMatrix& sign, std::size_t min_len, std::size_t max_len, WordMode mode,
                Fn&& fn, EnumLimit limit) {
  if (min_len == 0 || max_len < min_len) throw invalid_input("word length must be at least 1");
  const int k = static_cast<int>(sign.size());
  Word word;
  word.reserve(max_len);
  std::uint64_t nodes = 0;
  std::uint64_t yielded = 0;

  auto descend = [&](auto&& self) -> void {
    for (int s = 0; s < k; ++s) {
      if (!word.empty() && mode != WordMode::free_words && !sign.allows(word.back(), s)) continue;
      if (++nodes > limit.max_nodes) {
        enumeration_limit err("word enumeration exceeded " + std::to_string(limit.max_nodes) +
                                  " nodes",
                              yielded);
        throw err;
      }
      word.push_back(s);
      if (word.size() >= min_len &&
          (mode != WordMode::periodic || sign.allows(word.back(), word.front()))) {
        ++yielded;
        fn(static_cast<const Word&>(word));
      }
      if (word.size() < max_len) self(self);
      word.pop_back();
    }
  };
  descend(descend);
}

}  // namespace detail

/// Visit the words of length n satisfying the mode predicate, in
/// lexicographic order. Throws enumeration_limit when the node budget is
/// exhausted.
template <class Fn>
void for_each_word(const SignMatrix& sign, std::size_t n, WordMode mode, Fn&& fn,
                   EnumLimit limit = {}) {
  detail::walk_words(sign, n, n, mode, std::forward<Fn>(fn), limit);
}

/// Visit every word of length 1..max_len satisfying the mode predicate
/// (prefix order). Used by sweeps that check all short words at once.
template <class Fn>
void for_each_word_up_to(const SignMatrix& sign, std::size_t max_len, WordMode mode, Fn&& fn,
                         EnumLimit limit = {}) {
  detail::walk_words(sign, 1, max_len, mode, std::forward<Fn>(fn), limit);
}

inline std::vector<Word> enumerate_words(const SignMatrix& sign, std::size_t n, WordMode mode,
                                         EnumLimit limit = {}) {
  std::vector<Word> out;
  for_each_word(sign, n, mode, [&](const Word& w) { out.push_back(w); }, limit);
  return out;
}

/// Strong connectivity of the transition graph; equivalent to the
/// matrix-power criterion (some power of the sign matrix is positive in
/// every entry when combined over N <= K).
inline bool is_irreducible(const SignMatrix& sign) {
  const std::size_t k = sign.size();
  auto reach = [&](bool forward) {
    std::vector<char> seen(k, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w = 0; w < static_cast<int>(k); ++w) {
        const bool edge = forward ? sign.allows(v, w) : sign.allows(w, v);
        if (edge && !seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    for (char c : seen)
      if (!c) return false;
    return true;
  };
  return reach(true) && reach(false);
}

struct AdmissibleCount {
  std::uint64_t value = 0;
  bool saturated = false;  // integer overflow; value clamped
};

/// |W^n| by transfer-matrix counting: n-1 integer matrix-vector products.
/// Saturates instead of overflowing.
inline AdmissibleCount count_admissible(const SignMatrix& sign, std::size_t n) {
  if (n == 0) throw invalid_input("word length must be at least 1");
  const std::size_t k = sign.size();
  std::vector<std::uint64_t> per_end(k, 1);
  bool saturated = false;
  for (std::size_t step = 1; step < n; ++step) {
    std::vector<std::uint64_t> next(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
      if (per_end[i] == 0) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (!sign.allows(static_cast<int>(i), static_cast<int>(j))) continue;
        if (next[j] > UINT64_MAX - per_end[i]) {
          next[j] = UINT64_MAX;
          saturated = true;
        } else {
          next[j] += per_end[i];
        }
      }
    }
    per_end = std::move(next);
  }
  AdmissibleCount out;
  out.saturated = saturated;
  for (std::uint64_t c : per_end) {
    if (out.value > UINT64_MAX - c) {
      out.value = UINT64_MAX;
      out.saturated = true;
      break;
    }
    out.value += c;
  }
  return out;
}

}  // namespace cjsr
