#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cjsr/eigen.hpp"
#include "cjsr/error.hpp"
#include "cjsr/lift.hpp"
#include "cjsr/matrix.hpp"
#include "cjsr/subshift.hpp"

namespace cjsr {

inline double nth_root(double v, std::size_t n) {
  if (n == 1) return v;
  if (n == 2) return std::sqrt(v);
  return std::pow(v, 1.0 / static_cast<double>(n));
}

// Relative window treated as a tie when maximizing over words. Cyclic
// rotations of a closed word share the exact spectral radius but round
// differently, so a strict comparison would make the reported witness
// depend on rounding noise; within the window the lexicographically first
// word wins.
inline constexpr double kWitnessTieRel = 1e-12;

struct LowerBoundResult {
  double value = 0.0;
  Word witness;  // empty when no periodically extendable word exists
  // Lexicographically first word whose rooted radius reaches 1; kept so a
  // verdict can certify instability with the earliest witness.
  std::optional<Word> first_unstable;
  double first_unstable_value = 0.0;
};

struct UpperBoundResult {
  double value = 0.0;
  Word witness;
};

struct UpperBoundOptions {
  bool prune = true;
  EnumLimit limit;
  NormKind norm = NormKind::spectral;
};

/// max over periodically extendable n-words of rho(product)^(1/n), with the
/// lexicographically smallest maximizing word. Returns value 0 and an empty
/// witness when no such word exists (the limsup in the radius definition
/// ignores empty lengths).
inline LowerBoundResult lower_bound_at(const MatrixSystem& sys, std::size_t n,
                                       EnumLimit limit = {}) {
  if (n == 0) throw invalid_input("word length must be at least 1");
  const SignMatrix& sign = sys.sign();
  const int k = static_cast<int>(sign.size());
  LowerBoundResult out;

  std::vector<Matrix> products;  // products[t] = product of word[0..t]
  products.reserve(n);
  Word word;
  word.reserve(n);
  std::uint64_t nodes = 0;

  auto descend = [&](auto&& self) -> void {
    for (int s = 0; s < k; ++s) {
      if (!word.empty() && !sign.allows(word.back(), s)) continue;
      if (++nodes > limit.max_nodes) {
        enumeration_limit err(
            "periodic-word sweep exceeded " + std::to_string(limit.max_nodes) + " nodes at n=" +
                std::to_string(n),
            nodes);
        err.partial_value = out.value;
        err.partial_is_valid_bound = true;  // a max over a subset is still a lower bound
        throw err;
      }
      word.push_back(s);
      products.push_back(word.size() == 1
                             ? sys.matrix(static_cast<std::size_t>(s))
                             : multiply(products.back(), sys.matrix(static_cast<std::size_t>(s))));
      if (word.size() == n) {
        if (sign.allows(word.back(), word.front())) {
          const double value = nth_root(spectral_radius(products.back()), n);
          if (out.witness.empty() || value > out.value * (1.0 + kWitnessTieRel)) {
            out.value = value;
            out.witness = word;
          }
          if (!out.first_unstable && value >= 1.0) {
            out.first_unstable = word;
            out.first_unstable_value = value;
          }
        }
      } else {
        self(self);
      }
      products.pop_back();
      word.pop_back();
    }
  };
  descend(descend);
  if (out.witness.empty()) out.value = 0.0;
  return out;
}

/// max over ALL K^n free words of ||lifted product||^(1/n). Why this bounds
/// the constrained radius at every single n: non-admissible products vanish
/// on the lift, admissible lifted products dominate the base products in
/// norm, and the free lifted family is submultiplicative, so Fekete's
/// subadditivity applies to the free sequence.
///
/// Search is depth-first with branch-and-bound: a prefix is abandoned when
/// prefix_norm * fmax^(remaining) cannot reach the incumbent (within a
/// 1e-10 relative guard so pruning never changes the exact maximum).
inline UpperBoundResult upper_bound_at(const MatrixSystem& sys, const LiftedSystem& lift,
                                       std::size_t n, UpperBoundOptions opts = {}) {
  if (n == 0) throw invalid_input("word length must be at least 1");
  if (lift.alphabet_size() != sys.alphabet_size() || lift.base_dimension() != sys.dimension())
    throw invalid_input("lifted system does not belong to the given base system");
  const int k = static_cast<int>(lift.alphabet_size());
  double fmax = 0.0;
  for (const Matrix& m : lift.matrices()) fmax = std::max(fmax, matrix_norm(m, opts.norm));

  double best_norm = -1.0;  // -1: no leaf recorded yet
  Word best_word;
  std::vector<Matrix> products;
  products.reserve(n);
  Word word;
  word.reserve(n);
  std::uint64_t nodes = 0;
  bool capped = false;

  auto record_leaf = [&](double norm_value, const Word& w) {
    if (best_norm < 0.0 || norm_value > best_norm * (1.0 + kWitnessTieRel)) {
      best_norm = norm_value;
      best_word = w;
    }
  };

  auto descend = [&](auto&& self) -> void {
    for (int s = 0; s < k; ++s) {
      if (++nodes > opts.limit.max_nodes) {
        capped = true;
        return;
      }
      word.push_back(s);
      products.push_back(word.size() == 1
                             ? lift.matrix(static_cast<std::size_t>(s))
                             : multiply(products.back(), lift.matrix(static_cast<std::size_t>(s))));
      if (word.size() == n) {
        record_leaf(matrix_norm(products.back(), opts.norm), word);
      } else {
        bool explore = true;
        if (opts.prune) {
          const double prefix_norm = matrix_norm(products.back(), opts.norm);
          if (prefix_norm == 0.0) {
            // Every completion is zero; the lexicographically first one
            // pads with symbol 0, matching what the exhaustive walk finds.
            if (best_norm < 0.0) {
              Word padded = word;
              padded.resize(n, 0);
              record_leaf(0.0, padded);
            }
            explore = false;
          } else if (best_norm > 0.0) {
            const double reach =
                prefix_norm * std::pow(fmax, static_cast<double>(n - word.size()));
            if (reach < best_norm * (1.0 - 1e-10)) explore = false;
          }
        }
        if (explore) self(self);
      }
      products.pop_back();
      word.pop_back();
      if (capped) return;
    }
  };
  descend(descend);

  if (capped) {
    enumeration_limit err("free-word sweep exceeded " + std::to_string(opts.limit.max_nodes) +
                              " nodes at n=" + std::to_string(n),
                          nodes);
    err.partial_value = best_norm < 0.0 ? 0.0 : nth_root(best_norm, n);
    err.partial_is_valid_bound = false;  // a max over part of the tree bounds nothing
    throw err;
  }
  UpperBoundResult out;
  out.value = nth_root(std::max(best_norm, 0.0), n);
  out.witness = best_word;
  return out;
}

struct BoundRecord {
  std::size_t n = 0;
  double lower = 0.0;
  double upper = 0.0;
  Word witness_lower;
  Word witness_upper;
  std::optional<Word> first_unstable;
  double first_unstable_value = 0.0;
};

struct SpectralBounds {
  std::vector<BoundRecord> trace;
  double best_lower = 0.0;
  double best_upper = std::numeric_limits<double>::infinity();
  std::size_t best_lower_n = 0;
  std::size_t best_upper_n = 0;
  std::size_t max_length_searched = 0;
  bool reached_gap = false;
  double target_gap = 0.0;

  double gap() const { return best_upper - best_lower; }
};

struct EstimateOptions {
  std::size_t max_len = 12;
  double target_gap = 1e-3;
  EnumLimit limit;
  NormKind norm = NormKind::spectral;
  bool prune = true;
};

/// Sweep n = 1..max_len collecting lower/upper bounds; the envelopes
/// converge to the same limit (the Berger-Wang identity for constrained
/// radii), so the run stops early once the bracket is within target_gap.
inline SpectralBounds estimate_radius(const MatrixSystem& sys, EstimateOptions opts = {}) {
  if (opts.max_len == 0) throw invalid_input("max_len must be at least 1");
  if (!(opts.target_gap > 0.0)) throw invalid_input("target_gap must be positive");
  const LiftedSystem lift = build_lift(sys);
  SpectralBounds out;
  out.target_gap = opts.target_gap;
  for (std::size_t n = 1; n <= opts.max_len; ++n) {
    LowerBoundResult lo = lower_bound_at(sys, n, opts.limit);
    UpperBoundResult hi =
        upper_bound_at(sys, lift, n, UpperBoundOptions{opts.prune, opts.limit, opts.norm});
    BoundRecord rec;
    rec.n = n;
    rec.lower = lo.value;
    rec.upper = hi.value;
    rec.witness_lower = lo.witness;
    rec.witness_upper = hi.witness;
    rec.first_unstable = lo.first_unstable;
    rec.first_unstable_value = lo.first_unstable_value;
    out.trace.push_back(std::move(rec));
    if (lo.value > out.best_lower) {
      out.best_lower = lo.value;
      out.best_lower_n = n;
    }
    if (hi.value < out.best_upper) {
      out.best_upper = hi.value;
      out.best_upper_n = n;
    }
    out.max_length_searched = n;
    if (out.best_upper - out.best_lower <= opts.target_gap) {
      out.reached_gap = true;
      break;
    }
  }
  return out;
}

enum class Stability { uniformly_stable, not_uniformly_stable, undecided };

inline const char* to_string(Stability s) {
  switch (s) {
    case Stability::uniformly_stable: return "UniformlyStable";
    case Stability::not_uniformly_stable: return "NotUniformlyStable";
    default: return "Undecided";
  }
}

struct StabilityVerdict {
  Stability status = Stability::undecided;
  double bound = 0.0;               // certified radius bound or witness value
  std::optional<Word> witness;      // unstable closed path, when one exists
  std::size_t max_length_searched = 0;
};

/// Three-valued decision with a floating-point margin:
///   UniformlyStable     when best_upper < 1 - margin,
///   NotUniformlyStable  when some periodic word certifies rooted radius
///                       >= 1 + margin (earliest such witness reported),
///   Undecided           otherwise, with the bracket left to the caller.
inline StabilityVerdict decide_uniform_stability(const SpectralBounds& bounds,
                                                 double margin = 1e-9) {
  StabilityVerdict v;
  v.max_length_searched = bounds.max_length_searched;
  for (const BoundRecord& rec : bounds.trace) {
    if (rec.first_unstable && rec.first_unstable_value >= 1.0 + margin) {
      v.status = Stability::not_uniformly_stable;
      v.bound = rec.first_unstable_value;
      v.witness = rec.first_unstable;
      return v;
    }
    if (rec.lower >= 1.0 + margin) {
      v.status = Stability::not_uniformly_stable;
      v.bound = rec.lower;
      v.witness = rec.witness_lower;
      return v;
    }
  }
  if (bounds.best_upper < 1.0 - margin) {
    v.status = Stability::uniformly_stable;
    v.bound = bounds.best_upper;
    return v;
  }
  v.status = Stability::undecided;
  v.bound = bounds.best_upper;
  return v;
}

}  // namespace cjsr
