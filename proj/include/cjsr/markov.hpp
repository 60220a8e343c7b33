#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "cjsr/eigen.hpp"
#include "cjsr/error.hpp"
#include "cjsr/lift.hpp"
#include "cjsr/matrix.hpp"
#include "cjsr/rng.hpp"
#include "cjsr/subshift.hpp"

namespace cjsr {

namespace detail {

inline void check_stochastic_with_sign(const Matrix& p, const SignMatrix& sign,
                                       const std::string& what) {
  const std::size_t k = sign.size();
  if (p.rows() != k || p.cols() != k)
    throw invalid_input(what + ": transition matrix must be " + std::to_string(k) + "x" +
                        std::to_string(k));
  for (std::size_t i = 0; i < k; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double v = p(i, j);
      if (v < 0.0) throw invalid_input(what + ": negative transition probability");
      const bool on_support = sign.allows(static_cast<int>(i), static_cast<int>(j));
      if (on_support && !(v > 0.0))
        throw invalid_input(what + ": sign-support mismatch, entry (" + std::to_string(i + 1) +
                            "," + std::to_string(j + 1) + ") must be positive");
      if (!on_support && v != 0.0)
        throw invalid_input(what + ": sign-support mismatch, entry (" + std::to_string(i + 1) +
                            "," + std::to_string(j + 1) + ") must be zero");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw invalid_input(what + ": row " + std::to_string(i + 1) + " does not sum to 1");
  }
}

}  // namespace detail

enum class ScheduleMode { constant, periodic_list, random_perturbed };

inline const char* to_string(ScheduleMode m) {
  switch (m) {
    case ScheduleMode::constant: return "constant";
    case ScheduleMode::periodic_list: return "periodic_list";
    default: return "random_perturbed";
  }
}

/// Time-indexed family of stochastic matrices P(n), all sharing one sign
/// matrix, plus a strictly positive initial distribution. Three generator
/// modes cover the nonhomogeneity the theory allows: a constant matrix, a
/// periodic list, and per-step random perturbations of a base matrix
/// (support entries scaled by 1 + amplitude*u, rows renormalized, so the
/// support never changes).
class TransitionSchedule {
 public:
  static TransitionSchedule constant(SignMatrix sign, std::vector<double> initial, Matrix p) {
    detail::check_stochastic_with_sign(p, sign, "schedule");
    return TransitionSchedule(ScheduleMode::constant, std::move(sign), std::move(initial),
                              {std::move(p)}, 0.0, 0);
  }

  static TransitionSchedule periodic_list(SignMatrix sign, std::vector<double> initial,
                                          std::vector<Matrix> ps) {
    if (ps.empty()) throw invalid_input("periodic schedule needs at least one matrix");
    for (const Matrix& p : ps) detail::check_stochastic_with_sign(p, sign, "schedule");
    return TransitionSchedule(ScheduleMode::periodic_list, std::move(sign), std::move(initial),
                              std::move(ps), 0.0, 0);
  }

  static TransitionSchedule random_perturbed(SignMatrix sign, std::vector<double> initial,
                                             Matrix base, double amplitude, std::uint64_t seed) {
    detail::check_stochastic_with_sign(base, sign, "schedule base");
    if (!(amplitude >= 0.0 && amplitude < 1.0))
      throw invalid_input("perturbation amplitude must lie in [0, 1)");
    return TransitionSchedule(ScheduleMode::random_perturbed, std::move(sign), std::move(initial),
                              {std::move(base)}, amplitude, seed);
  }

  const SignMatrix& sign() const { return sign_; }
  std::size_t states() const { return sign_.size(); }
  const std::vector<double>& initial() const { return initial_; }
  ScheduleMode mode() const { return mode_; }
  const std::vector<Matrix>& matrices() const { return mats_; }
  double amplitude() const { return amplitude_; }
  std::uint64_t seed() const { return seed_; }

  /// Row i of P(n), written into `out` (length K). Perturbed entries are a
  /// pure function of (schedule seed, n, i, j), so every trajectory sees
  /// the same chain.
  void row_at(std::uint64_t n, int i, std::span<double> out) const {
    const std::size_t k = sign_.size();
    switch (mode_) {
      case ScheduleMode::constant:
        for (std::size_t j = 0; j < k; ++j) out[j] = mats_[0](static_cast<std::size_t>(i), j);
        return;
      case ScheduleMode::periodic_list: {
        const Matrix& p = mats_[n % mats_.size()];
        for (std::size_t j = 0; j < k; ++j) out[j] = p(static_cast<std::size_t>(i), j);
        return;
      }
      case ScheduleMode::random_perturbed: {
        const Matrix& base = mats_[0];
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
          const double b = base(static_cast<std::size_t>(i), j);
          if (b == 0.0) {
            out[j] = 0.0;
            continue;
          }
          const double u =
              2.0 * keyed_unit(seed_, n, static_cast<std::uint64_t>(i) * k + j) - 1.0;
          out[j] = b * (1.0 + amplitude_ * u);
          sum += out[j];
        }
        for (std::size_t j = 0; j < k; ++j) out[j] /= sum;
        return;
      }
    }
  }

  Matrix matrix_at(std::uint64_t n) const {
    const std::size_t k = sign_.size();
    Matrix out(k, k);
    std::vector<double> row(k);
    for (std::size_t i = 0; i < k; ++i) {
      row_at(n, static_cast<int>(i), row);
      for (std::size_t j = 0; j < k; ++j) out(i, j) = row[j];
    }
    return out;
  }

  friend bool operator==(const TransitionSchedule&, const TransitionSchedule&) = default;

 private:
  TransitionSchedule(ScheduleMode mode, SignMatrix sign, std::vector<double> initial,
                     std::vector<Matrix> mats, double amplitude, std::uint64_t seed)
      : mode_(mode),
        sign_(std::move(sign)),
        initial_(std::move(initial)),
        mats_(std::move(mats)),
        amplitude_(amplitude),
        seed_(seed) {
    if (initial_.size() != sign_.size())
      throw invalid_input("initial distribution length must match the number of states");
    double sum = 0.0;
    for (double p : initial_) {
      if (!(p > 0.0))
        throw invalid_input("initial distribution must be strictly positive (irreducible)");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw invalid_input("initial distribution must sum to 1");
  }

  ScheduleMode mode_;
  SignMatrix sign_;
  std::vector<double> initial_;
  std::vector<Matrix> mats_;
  double amplitude_;
  std::uint64_t seed_;
};

struct StationaryVector {
  std::vector<double> p;
  double residual = 0.0;  // ||pP - p||_inf
};

/// Perron-Frobenius left fixed vector of an irreducible row-stochastic
/// matrix, by power iteration on the transpose action. Iterates the lazy
/// map p <- p(P+I)/2, which has the same fixed vector but also converges
/// for periodic chains; the residual is measured against P itself.
inline StationaryVector stationary_distribution(const Matrix& p_matrix) {
  const std::size_t k = p_matrix.rows();
  if (!p_matrix.square()) throw invalid_input("stationary distribution needs a square matrix");
  std::vector<std::uint8_t> bits(k * k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double v = p_matrix(i, j);
      if (v < 0.0) throw invalid_input("transition probabilities must be nonnegative");
      bits[i * k + j] = v > 0.0 ? 1 : 0;
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) sum += p_matrix(i, j);
    if (std::abs(sum - 1.0) > 1e-12)
      throw invalid_input("transition matrix row " + std::to_string(i + 1) +
                          " does not sum to 1");
  }
  const SignMatrix sign(k, std::move(bits));
  if (!is_irreducible(sign))
    throw invalid_input("stationary distribution needs an irreducible sign pattern");

  std::vector<double> p(k, 1.0 / static_cast<double>(k)), next(k, 0.0);
  auto residual_of = [&](const std::vector<double>& v) {
    double r = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      double img = 0.0;
      for (std::size_t i = 0; i < k; ++i) img += v[i] * p_matrix(i, j);
      r = std::max(r, std::abs(img - v[j]));
    }
    return r;
  };

  double res = residual_of(p);
  constexpr std::size_t kMaxIters = 1'000'000;
  for (std::size_t it = 0; it < kMaxIters && res > 0.5e-12; ++it) {
    for (std::size_t j = 0; j < k; ++j) {
      double img = 0.0;
      for (std::size_t i = 0; i < k; ++i) img += p[i] * p_matrix(i, j);
      next[j] = 0.5 * (img + p[j]);
    }
    double sum = 0.0;
    for (double v : next) sum += v;
    for (double& v : next) v /= sum;
    p.swap(next);
    res = residual_of(p);
  }
  if (res > 1e-12)
    throw numerical_error("stationary power iteration did not reach residual 1e-12", res);
  for (double v : p)
    if (!(v > 0.0))
      throw numerical_error("stationary vector has a non-positive entry", res);
  return StationaryVector{std::move(p), res};
}

/// Canonical Markov measure of the cylinder set of `word`:
/// p_{j0} * p_{j0 j1} * ... Exactly zero iff the word leaves the support,
/// i.e. iff it is not admissible for the sign pattern of P.
inline double cylinder_measure(const StationaryVector& stat, const Matrix& p_matrix,
                               const Word& word) {
  if (word.empty()) throw invalid_input("cylinder of the empty word is undefined");
  for (int s : word)
    if (s < 0 || static_cast<std::size_t>(s) >= stat.p.size())
      throw invalid_input("word symbol out of range");
  double m = stat.p[static_cast<std::size_t>(word[0])];
  for (std::size_t t = 0; t + 1 < word.size(); ++t)
    m *= p_matrix(static_cast<std::size_t>(word[t]), static_cast<std::size_t>(word[t + 1]));
  return m;
}

/// Sample a length-`steps` state word: i0 from the initial distribution,
/// then i_{t+1} from row i_t of P(t). Sampling walks only support entries,
/// so the result is admissible by construction.
inline Word sample_trajectory(const TransitionSchedule& schedule, std::size_t steps,
                              RngStream stream) {
  if (steps == 0) throw invalid_input("trajectory needs at least one step");
  const std::size_t k = schedule.states();
  Word word;
  word.reserve(steps);

  auto pick = [&](std::span<const double> weights, int restrict_from) {
    const double u = stream.next_unit();
    double cum = 0.0;
    int last_support = -1;
    for (std::size_t j = 0; j < k; ++j) {
      const bool on_support =
          restrict_from < 0 ? weights[j] > 0.0 : schedule.sign().allows(restrict_from, static_cast<int>(j));
      if (!on_support) continue;
      last_support = static_cast<int>(j);
      cum += weights[j];
      if (u < cum) return static_cast<int>(j);
    }
    return last_support;  // guards cum rounding slightly below 1
  };

  word.push_back(pick(schedule.initial(), -1));
  std::vector<double> row(k);
  for (std::size_t t = 1; t < steps; ++t) {
    const int prev = word.back();
    schedule.row_at(t - 1, prev, row);
    word.push_back(pick(row, prev));
  }
  return word;
}

/// Finite-horizon Lyapunov estimate (1/n) log ||S_{i0} ... S_{i_{n-1}}||
/// with per-step renormalization, so products of any length stay in range.
/// Returns nullopt when the product collapses to the exact zero matrix.
inline std::optional<double> lyapunov_along(const Word& word, const MatrixSystem& sys) {
  if (word.empty()) throw invalid_input("Lyapunov estimate needs a nonempty word");
  for (int s : word)
    if (s < 0 || static_cast<std::size_t>(s) >= sys.alphabet_size())
      throw invalid_input("word symbol out of range");
  const std::size_t d = sys.dimension();
  Matrix prod = sys.matrix(static_cast<std::size_t>(word[0]));
  Matrix work(d, d);
  double log_scale = 0.0;
  double c = max_abs(prod);
  if (c == 0.0) return std::nullopt;
  log_scale += std::log(c);
  scale_in_place(prod, 1.0 / c);
  for (std::size_t t = 1; t < word.size(); ++t) {
    multiply_into(work, prod, sys.matrix(static_cast<std::size_t>(word[t])));
    std::swap(prod, work);
    c = max_abs(prod);
    if (c == 0.0) return std::nullopt;
    log_scale += std::log(c);
    scale_in_place(prod, 1.0 / c);
  }
  return (log_scale + std::log(operator_norm(prod))) / static_cast<double>(word.size());
}

struct LyapunovEstimate {
  std::vector<std::optional<double>> estimates;  // nullopt: product hit exact zero
  std::size_t collapsed = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double stddev = 0.0;  // population deviation over finite estimates
  std::size_t steps = 0;
  std::size_t trajectories = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo top-Lyapunov-exponent experiment: `trajectories` independent
/// sample paths of `steps` symbols each, one rooted log-norm per path.
/// Trajectory t draws from stream (seed, t), so results are reproducible
/// bit-for-bit for any thread count.
inline LyapunovEstimate monte_carlo_lyapunov(const MatrixSystem& sys,
                                             const TransitionSchedule& schedule,
                                             std::size_t trajectories, std::size_t steps,
                                             std::uint64_t seed, unsigned threads = 1) {
  if (trajectories == 0) throw invalid_input("need at least one trajectory");
  if (steps == 0) throw invalid_input("need at least one step");
  if (sys.alphabet_size() != schedule.states())
    throw invalid_input("schedule state count must match the system");

  LyapunovEstimate out;
  out.steps = steps;
  out.trajectories = trajectories;
  out.seed = seed;
  out.estimates.assign(trajectories, std::nullopt);

  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      const Word word = sample_trajectory(schedule, steps, RngStream(seed, t));
      out.estimates[t] = lyapunov_along(word, sys);
    }
  };

  const unsigned workers =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(trajectories)));
  if (workers == 1) {
    run_range(0, trajectories);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (trajectories + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(trajectories, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(run_range, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  // Order-independent reduction over the stored slots.
  double sum = 0.0, sum_sq = 0.0;
  std::size_t finite = 0;
  for (const auto& e : out.estimates) {
    if (!e) {
      ++out.collapsed;
      continue;
    }
    ++finite;
    sum += *e;
    sum_sq += (*e) * (*e);
    if (finite == 1) {
      out.min = out.max = *e;
    } else {
      out.min = std::min(out.min, *e);
      out.max = std::max(out.max, *e);
    }
  }
  if (finite > 0) {
    out.mean = sum / static_cast<double>(finite);
    const double var =
        std::max(0.0, sum_sq / static_cast<double>(finite) - out.mean * out.mean);
    out.stddev = std::sqrt(var);
  }
  return out;
}

}  // namespace cjsr
