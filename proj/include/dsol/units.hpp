#pragma once

#include <cmath>

// Unit conventions used throughout the library: angles in radians, times in
// seconds, powers in watts, distances in meters, gains and losses as linear
// (dimensionless) factors. Decibels appear only at module boundaries
// (scenario files, report rendering, CLI flags).

namespace dsol {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Physical constants.
inline constexpr double kSpeedOfLight = 299792458.0;        // m/s
inline constexpr double kPlanck = 6.62607015e-34;           // J s
inline constexpr double kAstronomicalUnit = 1.49597871e11;  // m

// Interface unit factors.
inline constexpr double kMicroradian = 1e-6;  // rad
inline constexpr double kNanosecond = 1e-9;   // s
inline constexpr double kNanometer = 1e-9;    // m

inline double db_from_linear(double x) { return 10.0 * std::log10(x); }
inline double linear_from_db(double db) { return std::pow(10.0, db / 10.0); }

// Attenuations tracked as natural-log exponents ("nats"): A = -ln(L).
inline constexpr double kDbPerNat = 4.34294481903251827651128918916605082;  // 10/ln(10)
inline double db_from_nats(double nats) { return nats * kDbPerNat; }
inline double nats_from_db(double db) { return db / kDbPerNat; }

}  // namespace dsol
