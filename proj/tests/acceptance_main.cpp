// Acceptance suite: end-to-end checks with pinned tolerances, one PASS/FAIL
// line per criterion. Criteria 1, 2, 7 and 9 drive the CLI binary (path via
// --cli); the rest exercise the library directly.
//
// Usage: acceptance_tests [--cli PATH] [criterion ...]

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cjsr/cjsr.hpp"
#include "oracles.hpp"

namespace {

using cjsr::Matrix;
using cjsr::MatrixSystem;
using cjsr::SignMatrix;
using cjsr::Word;
using njson = nlohmann::ordered_json;

std::string g_cli_path;

struct CliResult {
  std::string out;
  int exit_code = -1;
  double wall_ms = 0.0;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = "\"" + g_cli_path + "\" " + args + " 2>/dev/null";
  const auto start = std::chrono::steady_clock::now();
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed for: " + cmd);
  CliResult res;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, n);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  res.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                    .count();
  return res;
}

class TempFile {
 public:
  TempFile(const std::string& tag, const std::string& content) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("cjsr_accept_" + std::to_string(::getpid()) + "_" + tag + "_" +
             std::to_string(counter++) + ".json");
    std::ofstream out(path_, std::ios::binary);
    out << content;
  }
  ~TempFile() { std::error_code ec; std::filesystem::remove(path_, ec); }
  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

const char* kAlternatingFixture = R"({
  "dimension": 1,
  "matrices": [[[2.0]], [[0.3333333333333333]]],
  "sign_matrix": [[0, 1], [1, 0]],
  "initial_distribution": [0.5, 0.5],
  "schedule": {
    "mode": "random_perturbed",
    "base": [[0.0, 1.0], [1.0, 0.0]],
    "amplitude": 0.5,
    "seed": 42
  }
})";

const char* kThreeCycleFixture = R"({
  "dimension": 1,
  "matrices": [[[1.0]], [[1.0]], [[1.0]]],
  "sign_matrix": [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
})";

const char* kExpandingFixture = R"({
  "dimension": 1,
  "matrices": [[[2.0]], [[3.0]]],
  "sign_matrix": [[1, 1], [1, 1]],
  "initial_distribution": [0.5, 0.5],
  "schedule": {
    "mode": "constant",
    "matrices": [[[0.5, 0.5], [0.5, 0.5]]]
  }
})";

struct Failure {
  std::string detail;
};

#define EXPECT(cond, msg)                                         \
  do {                                                            \
    if (!(cond)) throw Failure{std::string("line ") +             \
                               std::to_string(__LINE__) + ": " + (msg)}; \
  } while (0)

// ---------------------------------------------------------------------------

// Criterion 1: the alternating scalar fixture, end to end through the CLI.
void criterion_1() {
  TempFile fixture("alt", kAlternatingFixture);
  const CliResult res = run_cli("stability \"" + fixture.str() + "\"");
  EXPECT(res.exit_code == 0, "stability exited with " + std::to_string(res.exit_code));
  EXPECT(res.wall_ms < 1000.0, "runtime " + std::to_string(res.wall_ms) + " ms >= 1 s");
  const njson report = njson::parse(res.out);
  EXPECT(report.at("verdict").at("status") == "UniformlyStable", "verdict not UniformlyStable");
  const double want = std::sqrt(2.0 / 3.0);
  const double lo = report.at("bounds").at("best_lower").get<double>();
  const double hi = report.at("bounds").at("best_upper").get<double>();
  EXPECT(std::abs(lo - want) <= 1e-9, "best_lower off: " + std::to_string(lo));
  EXPECT(std::abs(hi - want) <= 1e-9, "best_upper off: " + std::to_string(hi));
  EXPECT(report.at("bounds").at("best_lower_n").get<int>() == 2, "lower not achieved at n=2");
  EXPECT(report.at("bounds").at("best_upper_n").get<int>() == 2, "upper not achieved at n=2");
}

// Criterion 2: the three-state lift fixture matches the displayed matrices
// entry for entry.
void criterion_2() {
  TempFile fixture("cycle", kThreeCycleFixture);
  const CliResult res = run_cli("lift \"" + fixture.str() + "\"");
  EXPECT(res.exit_code == 0, "lift exited with " + std::to_string(res.exit_code));
  const njson report = njson::parse(res.out);
  const njson expected = njson::parse(R"([
    [[0,1,1],[0,0,0],[0,0,0]],
    [[0,0,0],[1,0,1],[0,0,0]],
    [[0,0,0],[0,0,0],[1,1,0]]
  ])");
  EXPECT(report.at("lifted") == expected, "lifted matrices differ from the displayed ones");
}

std::vector<MatrixSystem> random_sweep_systems() {
  std::mt19937_64 rng(0xC0FFEE);
  std::vector<MatrixSystem> out;
  out.reserve(50);
  for (int i = 0; i < 50; ++i) {
    const std::size_t k = 1 + rng() % 4;  // K <= 4
    const std::size_t d = 1 + rng() % 3;  // d <= 3
    out.push_back(oracles::random_system(rng, k, d));
  }
  return out;
}

/// Walk all free words of length <= max_len with incremental base and
/// lifted prefix products.
void sweep_products(const MatrixSystem& sys, const cjsr::LiftedSystem& lift, std::size_t max_len,
                    const std::function<void(const Word&, const Matrix&, const Matrix&)>& visit) {
  const int k = static_cast<int>(sys.alphabet_size());
  std::vector<Matrix> base_stack, lift_stack;
  Word word;
  auto descend = [&](auto&& self) -> void {
    for (int s = 0; s < k; ++s) {
      word.push_back(s);
      const auto us = static_cast<std::size_t>(s);
      base_stack.push_back(base_stack.empty() ? sys.matrix(us)
                                              : multiply(base_stack.back(), sys.matrix(us)));
      lift_stack.push_back(lift_stack.empty() ? lift.matrix(us)
                                              : multiply(lift_stack.back(), lift.matrix(us)));
      visit(word, base_stack.back(), lift_stack.back());
      if (word.size() < max_len) self(self);
      base_stack.pop_back();
      lift_stack.pop_back();
      word.pop_back();
    }
  };
  descend(descend);
}

// Criterion 3: non-admissible words annihilate the lift exactly, for 50
// random systems and every word of length <= 6, within 30 seconds.
void criterion_3() {
  const auto start = std::chrono::steady_clock::now();
  std::size_t checked = 0;
  for (const MatrixSystem& sys : random_sweep_systems()) {
    const auto lift = build_lift(sys);
    sweep_products(sys, lift, 6, [&](const Word& w, const Matrix&, const Matrix& lifted_prod) {
      if (w.size() < 2 || is_admissible(w, sys.sign())) return;
      ++checked;
      EXPECT(max_abs(lifted_prod) == 0.0, "nonzero lifted product on a forbidden word");
    });
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT(checked > 5000, "sweep visited too few forbidden words");
  EXPECT(secs < 30.0, "sweep took " + std::to_string(secs) + " s >= 30 s");
}

// Criterion 4: wrap-sign radius identity on admissible words and lifted
// nilpotency on non-periodically-extendable words, same sweep.
void criterion_4() {
  std::size_t identities = 0, nilpotencies = 0;
  for (const MatrixSystem& sys : random_sweep_systems()) {
    const auto lift = build_lift(sys);
    sweep_products(sys, lift, 6,
                   [&](const Word& w, const Matrix& base_prod, const Matrix& lifted_prod) {
      if (!is_admissible(w, sys.sign())) return;
      const double rho_lift = cjsr::spectral_radius(lifted_prod);
      const double wrap = sys.sign().allows(w.back(), w.front()) ? 1.0 : 0.0;
      const double rho_base = cjsr::spectral_radius(base_prod);
      EXPECT(std::abs(wrap * rho_base - rho_lift) <= 1e-8 * (1.0 + rho_lift),
             "wrap-sign radius identity violated");
      ++identities;
      if (!is_periodically_extendable(w, sys.sign())) {
        EXPECT(rho_lift <= 1e-8 * cjsr::operator_norm(lifted_prod),
               "lifted radius not nilpotent on a non-extendable word");
        ++nilpotencies;
      }
    });
  }
  EXPECT(identities > 2000, "sweep visited too few admissible words");
  EXPECT(nilpotencies > 200, "sweep visited too few non-extendable words");
}

// Criterion 5: Berger-Wang convergence, property form. Random systems are
// normalized so the periodic lower envelope up to length 8 peaks at 0.9;
// the bracket at length 10 must be narrow and no wider than at length 4.
void criterion_5() {
  std::mt19937_64 rng(0xBE59);
  int accepted = 0, narrow = 0, monotone = 0;
  while (accepted < 20) {
    const std::size_t k = 2 + rng() % 2;  // K in {2,3}
    MatrixSystem sys = oracles::random_system(rng, k, 2, 1.0, 0.8);

    cjsr::EstimateOptions probe;
    probe.max_len = 8;
    probe.target_gap = 1e-300;
    const auto before = estimate_radius(sys, probe);
    if (before.best_lower < 1e-6) continue;
    ++accepted;

    std::vector<Matrix> scaled;
    for (const Matrix& m : sys.matrices())
      scaled.push_back(scale(m, 0.9 / before.best_lower));
    const MatrixSystem normalized(scaled, sys.sign());

    cjsr::EstimateOptions full;
    full.max_len = 10;
    full.target_gap = 1e-300;
    const auto bounds = estimate_radius(normalized, full);

    auto width_at = [&](std::size_t len) {
      double lo = 0.0, hi = std::numeric_limits<double>::infinity();
      for (const auto& rec : bounds.trace) {
        if (rec.n > len) break;
        lo = std::max(lo, rec.lower);
        hi = std::min(hi, rec.upper);
      }
      return hi - lo;
    };
    if (width_at(10) <= 0.15) ++narrow;
    if (width_at(10) <= width_at(4) + 1e-12) ++monotone;
  }
  EXPECT(narrow == 20, "bracket width > 0.15 for " + std::to_string(20 - narrow) + "/20 systems");
  EXPECT(monotone >= 18, "width grew from n=4 to n=10 for too many systems");
}

// Criterion 6: branch-and-bound exactness and dominance over the direct
// constrained norm bound, exhaustively for K <= 3, d <= 2, n <= 6.
void criterion_6() {
  std::mt19937_64 rng(0x0DDBA11);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t k = 2 + rng() % 2;
    const std::size_t d = 1 + rng() % 2;
    const MatrixSystem sys = oracles::random_system(rng, k, d);
    const auto lift = build_lift(sys);
    for (std::size_t n = 1; n <= 6; ++n) {
      cjsr::UpperBoundOptions pruned, exhaustive;
      exhaustive.prune = false;
      const auto a = upper_bound_at(sys, lift, n, pruned);
      const auto b = upper_bound_at(sys, lift, n, exhaustive);
      EXPECT(a.value == b.value, "pruned max differs from the exhaustive max");
      EXPECT(a.witness == b.witness, "pruned witness differs from the exhaustive witness");
      const double direct = oracles::direct_constrained_upper(sys, n);
      EXPECT(a.value >= direct - 1e-9, "lift-based bound fell below the direct bound");
    }
  }
}

// Criterion 7: Monte Carlo experiment on the alternating fixture plus the
// expanding full-shift control, through the CLI for the fixture part.
void criterion_7() {
  const auto start = std::chrono::steady_clock::now();
  TempFile fixture("alt", kAlternatingFixture);
  const CliResult res =
      run_cli("simulate \"" + fixture.str() + "\" --trajectories 100 --steps 100000 --seed 2718");
  EXPECT(res.exit_code == 0, "simulate exited with " + std::to_string(res.exit_code));
  const njson report = njson::parse(res.out);
  const double target = 0.5 * std::log(2.0 / 3.0);
  const auto& estimates = report.at("lyapunov").at("estimates");
  EXPECT(estimates.size() == 100, "expected 100 per-trajectory estimates");
  for (const auto& e : estimates) {
    EXPECT(e.is_number(), "collapsed trajectory in the alternating chain");
    EXPECT(std::abs(e.get<double>() - target) <= 1.1e-4,
           "estimate " + std::to_string(e.get<double>()) + " off the alternating exponent");
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT(secs < 10.0, "simulation took " + std::to_string(secs) + " s >= 10 s");

  // Unstable control: mean within 3 sigma of the log-average growth.
  const std::size_t traj = 100, steps = 100000;
  const auto parsed = cjsr::parse_system_text(kExpandingFixture);
  const auto est =
      cjsr::monte_carlo_lyapunov(parsed.system, *parsed.schedule, traj, steps, 31415);
  const double mean_target = 0.5 * (std::log(2.0) + std::log(3.0));
  const double sigma = 0.5 * (std::log(3.0) - std::log(2.0)) /
                       std::sqrt(static_cast<double>(steps) * static_cast<double>(traj));
  EXPECT(std::abs(est.mean - mean_target) <= 3.0 * sigma,
         "control mean " + std::to_string(est.mean) + " not within 3 sigma of " +
             std::to_string(mean_target));
}

// Criterion 8: stationary vectors for 100 random irreducible chains, and
// the measure-positivity/admissibility equivalence, exhaustively to n = 6.
void criterion_8() {
  std::mt19937_64 rng(0x57A7);
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 1 + rng() % 6;
    const Matrix p = oracles::random_irreducible_stochastic(rng, k);
    const auto st = cjsr::stationary_distribution(p);
    EXPECT(st.residual <= 1e-12, "residual " + std::to_string(st.residual) + " too large");
    for (double v : st.p) EXPECT(v > 0.0, "stationary entry not positive");

    if (t % 5 == 0 && k >= 2 && k <= 4) {
      std::vector<std::uint8_t> bits(k * k, 0);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) bits[i * k + j] = p(i, j) > 0.0;
      const SignMatrix sign(k, std::move(bits));
      for (std::size_t n = 1; n <= 6; ++n)
        for (const Word& w : oracles::all_words(static_cast<int>(k), n))
          EXPECT((cjsr::cylinder_measure(st, p, w) > 0.0) == is_admissible(w, sign),
                 "cylinder positivity disagrees with admissibility");
    }
  }
}

// Criterion 9: repeated invocations with the same seed match byte for byte
// up to the trailing wall-clock field.
void criterion_9() {
  TempFile fixture("alt", kAlternatingFixture);
  auto body = [](const std::string& out) {
    const auto cut = out.find("\"wall_clock_ms\"");
    EXPECT(cut != std::string::npos, "report has no wall_clock_ms field");
    return out.substr(0, cut);
  };

  const std::string sim_args =
      "simulate \"" + fixture.str() + "\" --trajectories 5 --steps 2000 --seed 123";
  const CliResult s1 = run_cli(sim_args);
  const CliResult s2 = run_cli(sim_args);
  EXPECT(s1.exit_code == 0 && s2.exit_code == 0, "simulate exited nonzero");
  EXPECT(body(s1.out) == body(s2.out), "simulate reports differ under a fixed seed");

  const std::string stab_args = "stability \"" + fixture.str() + "\" --max-len 6";
  const CliResult t1 = run_cli(stab_args);
  const CliResult t2 = run_cli(stab_args);
  EXPECT(t1.exit_code == 0 && t2.exit_code == 0, "stability exited nonzero");
  EXPECT(body(t1.out) == body(t2.out), "stability reports differ between runs");
}

struct Criterion {
  int id;
  const char* label;
  void (*fn)();
};

const Criterion kCriteria[] = {
    {1, "alternating fixture end-to-end: UniformlyStable at sqrt(2/3), n=2, < 1 s", criterion_1},
    {2, "three-state lift matches the reference matrices exactly", criterion_2},
    {3, "forbidden words annihilate the lift exactly (50 systems, n <= 6, < 30 s)", criterion_3},
    {4, "wrap-sign radius identity and nilpotency on the same sweep", criterion_4},
    {5, "radius bracket narrows to <= 0.15 by n = 10 (20 normalized systems)", criterion_5},
    {6, "branch-and-bound exact; lift bound dominates the direct bound", criterion_6},
    {7, "Monte Carlo: alternating exponent to 1.1e-4; expanding control in 3 sigma", criterion_7},
    {8, "stationary residual <= 1e-12, positive entries; measure positivity", criterion_8},
    {9, "seeded runs reproduce reports byte-identically (mod wall clock)", criterion_9},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) {
      g_cli_path = argv[++i];
    } else {
      selected.push_back(std::atoi(arg.c_str()));
    }
  }
  if (g_cli_path.empty()) {
    // fall back to a sibling binary, the layout cmake produces
    const auto guess = std::filesystem::path(argv[0]).parent_path().parent_path() / "cjsr";
    g_cli_path = guess.string();
  }

  int failures = 0;
  for (const Criterion& c : kCriteria) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), c.id) == selected.end())
      continue;
    try {
      c.fn();
      std::printf("PASS  criterion %d: %s\n", c.id, c.label);
    } catch (const Failure& f) {
      ++failures;
      std::printf("FAIL  criterion %d: %s\n      %s\n", c.id, c.label, f.detail.c_str());
    } catch (const std::exception& e) {
      ++failures;
      std::printf("FAIL  criterion %d: %s\n      unexpected error: %s\n", c.id, c.label,
                  e.what());
    }
    std::fflush(stdout);
  }
  return failures;
}
