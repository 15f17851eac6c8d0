#pragma once

#include <cstdint>

namespace abase {

// Simulation clock: integer microseconds. No floating-point time anywhere.
using SimTime = std::int64_t;

constexpr SimTime kUsPerSecond = 1'000'000;
constexpr SimTime kUsPerHour = 3'600 * kUsPerSecond;
constexpr SimTime kUsPerDay = 24 * kUsPerHour;

constexpr SimTime us_from_seconds(double s) {
    return static_cast<SimTime>(s * static_cast<double>(kUsPerSecond) + 0.5);
}

constexpr double seconds_from_us(SimTime t) {
    return static_cast<double>(t) / static_cast<double>(kUsPerSecond);
}

}  // namespace abase
