// cjsr - stability analysis of Markovian switching systems.
//
// Subcommands: stability, lift, words, simulate, radius-trace. Input is a
// JSON system file; reports go to standard output as UTF-8 JSON (CSV
// available for radius-trace). Exit codes: 0 success, 1 error, 2 the
// stability verdict is Undecided.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cjsr/cjsr.hpp"

namespace {

struct LoadedInput {
  cjsr::ParsedSystem parsed;
  std::string raw;
};

LoadedInput load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cjsr::invalid_input("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string raw = buf.str();
  return LoadedInput{cjsr::parse_system_text(raw), std::move(raw)};
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

void emit(cjsr::json report, double wall_ms) {
  report["wall_clock_ms"] = wall_ms;
  std::cout << report.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability analysis of matrix systems switched by a Markovian chain "
               "with a constant transition sign matrix"};
  app.require_subcommand(1);

  std::string input_path;
  cjsr::StabilityRunConfig cfg;

  auto* stability = app.add_subcommand("stability", "Bound the constrained spectral radius and "
                                                    "decide uniform exponential stability");
  stability->add_option("input", input_path, "System JSON file")->required();
  stability->add_option("--max-len", cfg.max_len, "Longest word length to analyze")
      ->capture_default_str();
  stability->add_option("--gap", cfg.target_gap, "Stop once best_upper - best_lower <= gap")
      ->capture_default_str();
  stability->add_option("--max-nodes", cfg.max_nodes, "Enumeration node budget per sweep")
      ->capture_default_str();

  auto* lift = app.add_subcommand("lift", "Emit the {0,1}-matrix lift of the system");
  lift->add_option("input", input_path, "System JSON file")->required();

  auto* words = app.add_subcommand("words", "List admissible / periodic / free words");
  std::string words_mode = "admissible";
  std::size_t words_len = 1;
  std::uint64_t words_nodes = 10'000'000;
  words->add_option("input", input_path, "System JSON file")->required();
  words->add_option("--mode", words_mode, "admissible, periodic or free")->capture_default_str();
  words->add_option("--len", words_len, "Word length")->required();
  words->add_option("--max-nodes", words_nodes, "Enumeration node budget")->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo Lyapunov-exponent estimate along "
                                                  "sampled chain trajectories");
  std::size_t trajectories = 100;
  std::size_t steps = 10'000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  simulate->add_option("input", input_path, "System JSON file (must contain a schedule)")
      ->required();
  simulate->add_option("--trajectories", trajectories, "Number of sampled paths")
      ->capture_default_str();
  simulate->add_option("--steps", steps, "Steps per path")->capture_default_str();
  simulate->add_option("--seed", seed, "Seed for the trajectory streams")->capture_default_str();
  simulate->add_option("--threads", threads, "Worker thread cap (results are thread-invariant)")
      ->capture_default_str();

  auto* trace = app.add_subcommand("radius-trace", "Per-length lower/upper bound trace");
  std::string trace_format = "json";
  trace->add_option("input", input_path, "System JSON file")->required();
  trace->add_option("--max-len", cfg.max_len, "Longest word length to analyze")
      ->capture_default_str();
  trace->add_option("--gap", cfg.target_gap, "Stop once best_upper - best_lower <= gap")
      ->capture_default_str();
  trace->add_option("--max-nodes", cfg.max_nodes, "Enumeration node budget per sweep")
      ->capture_default_str();
  trace->add_option("--format", trace_format, "json or csv")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    LoadedInput in = load(input_path);

    if (*stability) {
      cjsr::SpectralBounds bounds;
      cjsr::StabilityVerdict verdict;
      cjsr::json report = cjsr::stability_report(in.parsed, in.raw, cfg, bounds, verdict);
      emit(std::move(report), elapsed_ms(start));
      return verdict.status == cjsr::Stability::undecided ? 2 : 0;
    }
    if (*lift) {
      emit(cjsr::lift_report(in.parsed, in.raw), elapsed_ms(start));
      return 0;
    }
    if (*words) {
      cjsr::WordMode mode;
      if (words_mode == "admissible")
        mode = cjsr::WordMode::admissible;
      else if (words_mode == "periodic")
        mode = cjsr::WordMode::periodic;
      else if (words_mode == "free")
        mode = cjsr::WordMode::free_words;
      else
        throw cjsr::invalid_input("unknown word mode '" + words_mode + "'");
      emit(cjsr::words_report(in.parsed, in.raw, mode, words_len, words_nodes),
           elapsed_ms(start));
      return 0;
    }
    if (*simulate) {
      cjsr::LyapunovEstimate est;
      cjsr::json report =
          cjsr::simulate_report(in.parsed, in.raw, trajectories, steps, seed, threads, est);
      emit(std::move(report), elapsed_ms(start));
      return 0;
    }
    if (*trace) {
      if (trace_format == "csv") {
        cjsr::EstimateOptions opts;
        opts.max_len = cfg.max_len;
        opts.target_gap = cfg.target_gap;
        opts.limit.max_nodes = cfg.max_nodes;
        std::cout << cjsr::radius_trace_csv(cjsr::estimate_radius(in.parsed.system, opts));
        return 0;
      }
      if (trace_format != "json")
        throw cjsr::invalid_input("unknown trace format '" + trace_format + "'");
      emit(cjsr::radius_trace_report(in.parsed, in.raw, cfg), elapsed_ms(start));
      return 0;
    }
  } catch (const cjsr::enumeration_limit& e) {
    std::cerr << "error: " << e.what() << " (" << e.produced << " nodes visited)\n";
    return 1;
  } catch (const cjsr::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
