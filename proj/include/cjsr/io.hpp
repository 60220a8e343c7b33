#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cjsr/error.hpp"
#include "cjsr/lift.hpp"
#include "cjsr/markov.hpp"
#include "cjsr/matrix.hpp"
#include "cjsr/subshift.hpp"

namespace cjsr {

using json = nlohmann::ordered_json;

struct ParsedSystem {
  MatrixSystem system;
  std::optional<TransitionSchedule> schedule;
};

inline std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

namespace detail {

[[noreturn]] inline void fail_at(const std::string& path, const std::string& what) {
  throw invalid_input(path + ": " + what);
}

inline const json& member(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail_at(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail_at(path, std::string("missing required field '") + key + "'");
  return *it;
}

inline double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) fail_at(path, "expected a number");
  return j.get<double>();
}

/// Parse a rows x cols grid of numbers (64-bit floats).
inline Matrix matrix_at(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail_at(path, "expected a non-empty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) fail_at(path + "[0]", "expected a non-empty row of numbers");
  std::vector<double> entries;
  entries.reserve(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = j[i];
    const std::string rpath = path + "[" + std::to_string(i) + "]";
    if (!row.is_array() || row.size() != cols) fail_at(rpath, "ragged or non-array row");
    for (std::size_t c = 0; c < cols; ++c)
      entries.push_back(number_at(row[c], rpath + "[" + std::to_string(c) + "]"));
  }
  try {
    return Matrix(rows, cols, std::move(entries));
  } catch (const invalid_input& e) {
    fail_at(path, e.what());
  }
}

inline SignMatrix sign_at(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail_at(path, "expected a non-empty array of rows");
  const std::size_t k = j.size();
  std::vector<std::uint8_t> bits;
  bits.reserve(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    const json& row = j[i];
    const std::string rpath = path + "[" + std::to_string(i) + "]";
    if (!row.is_array() || row.size() != k) fail_at(rpath, "sign matrix must be square");
    for (std::size_t c = 0; c < k; ++c) {
      const json& cell = row[c];
      // {0,1} entries must be integer literals, not floats.
      if (!cell.is_number_integer() && !cell.is_number_unsigned())
        fail_at(rpath + "[" + std::to_string(c) + "]", "sign entries must be integer 0 or 1");
      const auto v = cell.get<std::int64_t>();
      if (v != 0 && v != 1)
        fail_at(rpath + "[" + std::to_string(c) + "]", "sign entries must be 0 or 1");
      bits.push_back(static_cast<std::uint8_t>(v));
    }
  }
  try {
    return SignMatrix(k, std::move(bits));
  } catch (const invalid_input& e) {
    fail_at(path, e.what());
  }
}

inline std::vector<double> vector_at(const json& j, const std::string& path) {
  if (!j.is_array()) fail_at(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(number_at(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline TransitionSchedule schedule_at(const json& j, const std::string& path, SignMatrix sign,
                                      std::vector<double> initial) {
  const json& mode_j = member(j, "mode", path);
  if (!mode_j.is_string()) fail_at(path + ".mode", "expected a string");
  const std::string mode = mode_j.get<std::string>();
  try {
    if (mode == "constant") {
      const json& mats = member(j, "matrices", path);
      if (!mats.is_array() || mats.size() != 1)
        fail_at(path + ".matrices", "constant mode takes exactly one matrix");
      return TransitionSchedule::constant(std::move(sign), std::move(initial),
                                          matrix_at(mats[0], path + ".matrices[0]"));
    }
    if (mode == "periodic_list") {
      const json& mats = member(j, "matrices", path);
      if (!mats.is_array() || mats.empty())
        fail_at(path + ".matrices", "periodic_list mode needs at least one matrix");
      std::vector<Matrix> ps;
      ps.reserve(mats.size());
      for (std::size_t i = 0; i < mats.size(); ++i)
        ps.push_back(matrix_at(mats[i], path + ".matrices[" + std::to_string(i) + "]"));
      return TransitionSchedule::periodic_list(std::move(sign), std::move(initial), std::move(ps));
    }
    if (mode == "random_perturbed") {
      Matrix base = matrix_at(member(j, "base", path), path + ".base");
      const double amplitude = number_at(member(j, "amplitude", path), path + ".amplitude");
      std::uint64_t seed = 0;
      if (auto it = j.find("seed"); it != j.end()) {
        if (!it->is_number_unsigned() &&
            !(it->is_number_integer() && it->get<std::int64_t>() >= 0))
          fail_at(path + ".seed", "seed must be a non-negative integer");
        seed = it->get<std::uint64_t>();
      }
      return TransitionSchedule::random_perturbed(std::move(sign), std::move(initial),
                                                  std::move(base), amplitude, seed);
    }
  } catch (const invalid_input& e) {
    const std::string what = e.what();
    if (what.starts_with("$")) throw;  // already carries a location
    fail_at(path, what);
  }
  fail_at(path + ".mode", "unknown mode '" + mode +
                              "' (expected constant, periodic_list or random_perturbed)");
}

}  // namespace detail

/// Parse and validate a system description. Every violation is reported
/// with its JSON path.
inline ParsedSystem parse_system_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw invalid_input(std::string("$: not valid JSON: ") + e.what());
  }
  if (!j.is_object()) detail::fail_at("$", "expected a top-level object");

  const json& dim_j = detail::member(j, "dimension", "$");
  if (!dim_j.is_number_integer() && !dim_j.is_number_unsigned())
    detail::fail_at("$.dimension", "expected a positive integer");
  const std::int64_t d = dim_j.get<std::int64_t>();
  if (d < 1) detail::fail_at("$.dimension", "expected a positive integer");

  const json& mats_j = detail::member(j, "matrices", "$");
  if (!mats_j.is_array() || mats_j.empty())
    detail::fail_at("$.matrices", "expected a non-empty array of matrices");
  std::vector<Matrix> matrices;
  matrices.reserve(mats_j.size());
  for (std::size_t k = 0; k < mats_j.size(); ++k) {
    Matrix m = detail::matrix_at(mats_j[k], "$.matrices[" + std::to_string(k) + "]");
    if (m.rows() != static_cast<std::size_t>(d) || m.cols() != static_cast<std::size_t>(d))
      detail::fail_at("$.matrices[" + std::to_string(k) + "]",
                      "matrix must be " + std::to_string(d) + "x" + std::to_string(d));
    matrices.push_back(std::move(m));
  }

  SignMatrix sign = detail::sign_at(detail::member(j, "sign_matrix", "$"), "$.sign_matrix");
  if (sign.size() != matrices.size())
    detail::fail_at("$.sign_matrix",
                    "sign matrix size must equal the number of matrices (" +
                        std::to_string(matrices.size()) + ")");

  const std::size_t K = matrices.size();
  std::vector<double> initial(K, 1.0 / static_cast<double>(K));
  if (auto it = j.find("initial_distribution"); it != j.end()) {
    initial = detail::vector_at(*it, "$.initial_distribution");
    if (initial.size() != K)
      detail::fail_at("$.initial_distribution",
                      "expected " + std::to_string(K) + " probabilities");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < initial.size(); ++i) {
    if (!(initial[i] > 0.0))
      detail::fail_at("$.initial_distribution[" + std::to_string(i) + "]",
                      "probabilities must be strictly positive");
    sum += initial[i];
  }
  if (std::abs(sum - 1.0) > 1e-12)
    detail::fail_at("$.initial_distribution", "probabilities must sum to 1");

  std::optional<TransitionSchedule> schedule;
  if (auto it = j.find("schedule"); it != j.end())
    schedule = detail::schedule_at(*it, "$.schedule", sign, initial);

  MatrixSystem sys(std::move(matrices), std::move(sign));
  return ParsedSystem{std::move(sys), std::move(schedule)};
}

inline ParsedSystem parse_system_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_input("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_system_text(buf.str());
}

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json sign_to_json(const SignMatrix& s) {
  json rows = json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < s.size(); ++j)
      row.push_back(s.allows(static_cast<int>(i), static_cast<int>(j)) ? 1 : 0);
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Words are serialized 1-based, matching the file format and reports.
inline json word_to_json(const Word& w) {
  json out = json::array();
  for (int s : w) out.push_back(s + 1);
  return out;
}

/// Emit a parsed system back to the file schema (round-trip exact).
inline json system_to_json(const ParsedSystem& parsed) {
  const MatrixSystem& sys = parsed.system;
  json j;
  j["dimension"] = sys.dimension();
  json mats = json::array();
  for (const Matrix& m : sys.matrices()) mats.push_back(matrix_to_json(m));
  j["matrices"] = std::move(mats);
  j["sign_matrix"] = sign_to_json(sys.sign());
  if (parsed.schedule) {
    const TransitionSchedule& sched = *parsed.schedule;
    j["initial_distribution"] = sched.initial();
    json s;
    s["mode"] = to_string(sched.mode());
    switch (sched.mode()) {
      case ScheduleMode::constant:
      case ScheduleMode::periodic_list: {
        json list = json::array();
        for (const Matrix& m : sched.matrices()) list.push_back(matrix_to_json(m));
        s["matrices"] = std::move(list);
        break;
      }
      case ScheduleMode::random_perturbed:
        s["base"] = matrix_to_json(sched.matrices().front());
        s["amplitude"] = sched.amplitude();
        s["seed"] = sched.seed();
        break;
    }
    j["schedule"] = std::move(s);
  }
  return j;
}

}  // namespace cjsr
