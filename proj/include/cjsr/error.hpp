#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cjsr {

/// Base class for all library errors.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rejected input: dimension mismatches, invariant violations, malformed files.
class invalid_input : public error {
 public:
  using error::error;
};

/// An iterative numerical routine failed to converge. Carries the partial
/// result so callers can report it.
class numerical_error : public error {
 public:
  numerical_error(const std::string& what, double partial)
      : error(what), partial_result(partial) {}
  double partial_result;
};

/// A bounded enumeration hit its node budget. `produced` counts the words
/// yielded before the cap; `partial_value` is the best value seen so far
/// (NaN when the sweep collects no value). A capped sweep never certifies
/// a bound, so `partial_is_valid_bound` is false unless noted otherwise.
class enumeration_limit : public error {
 public:
  enumeration_limit(const std::string& what, std::uint64_t produced_in)
      : error(what), produced(produced_in) {}
  std::uint64_t produced;
  double partial_value = 0.0;
  bool partial_is_valid_bound = false;
};

}  // namespace cjsr
