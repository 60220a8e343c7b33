// Minimal library walkthrough: build a two-state scalar system whose only
// allowed switching is alternation, bound its constrained spectral radius,
// decide stability, and cross-check with a Monte Carlo Lyapunov estimate.

#include <cstdio>

#include "cjsr/cjsr.hpp"

int main() {
  using namespace cjsr;

  const SignMatrix sign = SignMatrix::from_grid({{0, 1}, {1, 0}});
  const MatrixSystem sys({Matrix::from_rows({{2.0}}), Matrix::from_rows({{1.0 / 3.0}})}, sign);

  EstimateOptions opts;
  opts.max_len = 8;
  const SpectralBounds bounds = estimate_radius(sys, opts);
  const StabilityVerdict verdict = decide_uniform_stability(bounds);
  std::printf("radius bracket: [%.12f, %.12f] after n = %zu\n", bounds.best_lower,
              bounds.best_upper, bounds.max_length_searched);
  std::printf("verdict: %s\n", to_string(verdict.status));

  const auto schedule = TransitionSchedule::constant(
      sign, {0.5, 0.5}, Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}));
  const LyapunovEstimate est = monte_carlo_lyapunov(sys, schedule, 20, 100000, 1);
  std::printf("Lyapunov estimate: mean %.9f over %zu trajectories\n", est.mean,
              est.trajectories);
  return 0;
}
