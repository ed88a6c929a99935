#pragma once

namespace donorspin {

// CODATA 2018 values, SI units.
inline constexpr double kTwoPi = 6.283185307179586476925287;
inline constexpr double kHbar = 1.054571817e-34;      // J s
inline constexpr double kMu0 = 1.25663706212e-6;      // T m / A
inline constexpr double kBohrMagneton = 9.2740100783e-24;  // J / T

// Internal unit conventions: angular frequencies in rad/s, magnetic fields in
// tesla, lengths in meters, strain dimensionless, electric fields in V/m.
// Conversions from human-friendly units happen only at the config boundary.

}  // namespace donorspin
