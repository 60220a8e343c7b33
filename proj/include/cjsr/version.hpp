#pragma once

namespace cjsr {

inline constexpr const char* kToolName = "cjsr";
inline constexpr const char* kVersion = "0.1.0";

// Random-stream contract, fixed per release (see rng.hpp).
inline constexpr const char* kRngContract = "cjsr-splitmix64-counter/v1";

}  // namespace cjsr
