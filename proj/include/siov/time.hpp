#pragma once

#include <cmath>
#include <cstdint>

namespace siov {

// Simulation time is integer microseconds: exact ordering, no float-comparison
// ties in the event queue. Latencies stay exact under summation.
using SimTimeUs = std::int64_t;

inline constexpr SimTimeUs kUsPerSecond = 1'000'000;
inline constexpr SimTimeUs kUsPerMs = 1'000;

inline SimTimeUs seconds_to_us(double s) {
  return static_cast<SimTimeUs>(std::llround(s * 1e6));
}

inline double us_to_seconds(SimTimeUs t) { return static_cast<double>(t) * 1e-6; }

inline double us_to_ms(SimTimeUs t) { return static_cast<double>(t) * 1e-3; }

}  // namespace siov
