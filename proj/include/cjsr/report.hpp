#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cjsr/io.hpp"
#include "cjsr/jsr.hpp"
#include "cjsr/lift.hpp"
#include "cjsr/markov.hpp"
#include "cjsr/subshift.hpp"
#include "cjsr/version.hpp"

namespace cjsr {

// Report assembly for the CLI. Reports are self-contained: re-running the
// tool on the echoed input with the same version and seed reproduces the
// body byte-for-byte, except for the trailing wall_clock_ms field.

inline json tool_header() {
  json j;
  j["name"] = kToolName;
  j["version"] = kVersion;
  j["rng"] = kRngContract;
  return j;
}

inline json input_echo(const ParsedSystem& parsed, const std::string& raw_text) {
  json j;
  j["hash"] = fnv1a64_hex(raw_text);
  j["states"] = parsed.system.alphabet_size();
  j["dimension"] = parsed.system.dimension();
  return j;
}

inline json bounds_to_json(const SpectralBounds& bounds) {
  json j;
  json trace = json::array();
  for (const BoundRecord& rec : bounds.trace) {
    json r;
    r["n"] = rec.n;
    r["lower"] = rec.lower;
    r["upper"] = rec.upper;
    r["witness_lower"] = word_to_json(rec.witness_lower);
    r["witness_upper"] = word_to_json(rec.witness_upper);
    trace.push_back(std::move(r));
  }
  j["trace"] = std::move(trace);
  j["best_lower"] = bounds.best_lower;
  j["best_lower_n"] = bounds.best_lower_n;
  j["best_upper"] = bounds.best_upper;
  j["best_upper_n"] = bounds.best_upper_n;
  j["max_length_searched"] = bounds.max_length_searched;
  j["reached_gap"] = bounds.reached_gap;
  j["target_gap"] = bounds.target_gap;
  return j;
}

inline json verdict_to_json(const StabilityVerdict& v) {
  json j;
  j["status"] = to_string(v.status);
  j["bound"] = v.bound;
  if (v.witness)
    j["witness"] = word_to_json(*v.witness);
  else
    j["witness"] = nullptr;
  j["max_length_searched"] = v.max_length_searched;
  return j;
}

inline json lyapunov_to_json(const LyapunovEstimate& est) {
  json j;
  json summary;
  summary["mean"] = est.mean;
  summary["min"] = est.min;
  summary["max"] = est.max;
  summary["stddev"] = est.stddev;
  j["summary"] = std::move(summary);
  j["steps"] = est.steps;
  j["trajectories"] = est.trajectories;
  j["seed"] = est.seed;
  j["collapsed"] = est.collapsed;
  json values = json::array();
  for (const auto& e : est.estimates) {
    if (e)
      values.push_back(*e);
    else
      values.push_back(nullptr);  // product collapsed to exact zero
  }
  j["estimates"] = std::move(values);
  return j;
}

struct StabilityRunConfig {
  std::size_t max_len = 12;
  double target_gap = 1e-3;
  std::uint64_t max_nodes = 10'000'000;
};

inline json stability_report(const ParsedSystem& parsed, const std::string& raw_text,
                             const StabilityRunConfig& cfg, SpectralBounds& bounds_out,
                             StabilityVerdict& verdict_out) {
  EstimateOptions opts;
  opts.max_len = cfg.max_len;
  opts.target_gap = cfg.target_gap;
  opts.limit.max_nodes = cfg.max_nodes;
  bounds_out = estimate_radius(parsed.system, opts);
  verdict_out = decide_uniform_stability(bounds_out);

  json j;
  j["tool"] = tool_header();
  j["command"] = "stability";
  j["input"] = input_echo(parsed, raw_text);
  json params;
  params["max_len"] = cfg.max_len;
  params["target_gap"] = cfg.target_gap;
  params["max_nodes"] = cfg.max_nodes;
  j["parameters"] = std::move(params);
  j["bounds"] = bounds_to_json(bounds_out);
  j["verdict"] = verdict_to_json(verdict_out);
  return j;
}

inline json lift_report(const ParsedSystem& parsed, const std::string& raw_text) {
  const LiftedSystem lift = build_lift(parsed.system);
  json j;
  j["tool"] = tool_header();
  j["command"] = "lift";
  j["input"] = input_echo(parsed, raw_text);
  j["lifted_dimension"] = lift.lifted_dimension();
  json mats = json::array();
  for (const Matrix& m : lift.matrices()) mats.push_back(matrix_to_json(m));
  j["lifted"] = std::move(mats);
  return j;
}

inline json words_report(const ParsedSystem& parsed, const std::string& raw_text, WordMode mode,
                         std::size_t length, std::uint64_t max_nodes) {
  EnumLimit limit{max_nodes};
  const std::vector<Word> words = enumerate_words(parsed.system.sign(), length, mode, limit);
  json j;
  j["tool"] = tool_header();
  j["command"] = "words";
  j["input"] = input_echo(parsed, raw_text);
  json params;
  params["mode"] = mode == WordMode::admissible ? "admissible"
                   : mode == WordMode::periodic ? "periodic"
                                                : "free";
  params["length"] = length;
  params["max_nodes"] = max_nodes;
  j["parameters"] = std::move(params);
  j["count"] = words.size();
  json list = json::array();
  for (const Word& w : words) list.push_back(word_to_json(w));
  j["words"] = std::move(list);
  return j;
}

inline json simulate_report(const ParsedSystem& parsed, const std::string& raw_text,
                            std::size_t trajectories, std::size_t steps, std::uint64_t seed,
                            unsigned threads, LyapunovEstimate& est_out) {
  if (!parsed.schedule)
    throw invalid_input("simulate needs a schedule in the system file ($.schedule)");
  est_out =
      monte_carlo_lyapunov(parsed.system, *parsed.schedule, trajectories, steps, seed, threads);
  json j;
  j["tool"] = tool_header();
  j["command"] = "simulate";
  j["input"] = input_echo(parsed, raw_text);
  json params;
  params["trajectories"] = trajectories;
  params["steps"] = steps;
  params["seed"] = seed;
  j["parameters"] = std::move(params);
  json sched;
  sched["mode"] = to_string(parsed.schedule->mode());
  if (parsed.schedule->mode() == ScheduleMode::random_perturbed) {
    sched["amplitude"] = parsed.schedule->amplitude();
    sched["seed"] = parsed.schedule->seed();
  }
  j["schedule"] = std::move(sched);
  j["lyapunov"] = lyapunov_to_json(est_out);
  return j;
}

inline json radius_trace_report(const ParsedSystem& parsed, const std::string& raw_text,
                                const StabilityRunConfig& cfg) {
  EstimateOptions opts;
  opts.max_len = cfg.max_len;
  opts.target_gap = cfg.target_gap;
  opts.limit.max_nodes = cfg.max_nodes;
  const SpectralBounds bounds = estimate_radius(parsed.system, opts);
  json j;
  j["tool"] = tool_header();
  j["command"] = "radius-trace";
  j["input"] = input_echo(parsed, raw_text);
  json params;
  params["max_len"] = cfg.max_len;
  params["target_gap"] = cfg.target_gap;
  params["max_nodes"] = cfg.max_nodes;
  j["parameters"] = std::move(params);
  j["bounds"] = bounds_to_json(bounds);
  return j;
}

/// Plot-ready CSV: one line per analyzed length with the running envelope.
inline std::string radius_trace_csv(const SpectralBounds& bounds) {
  std::string out = "n,lower,upper,best_lower,best_upper\n";
  double best_lower = 0.0;
  double best_upper = std::numeric_limits<double>::infinity();
  json cell;  // reuse nlohmann's shortest round-trip float formatting
  auto fmt = [&cell](double v) {
    cell = v;
    return cell.dump();
  };
  for (const BoundRecord& rec : bounds.trace) {
    best_lower = std::max(best_lower, rec.lower);
    best_upper = std::min(best_upper, rec.upper);
    out += std::to_string(rec.n) + "," + fmt(rec.lower) + "," + fmt(rec.upper) + "," +
           fmt(best_lower) + "," + fmt(best_upper) + "\n";
  }
  return out;
}

}  // namespace cjsr
