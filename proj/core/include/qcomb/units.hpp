#pragma once

#include <numbers>

// All frequencies inside the library are angular frequencies in rad/s and
// all times are seconds. These helpers convert user-facing units.
namespace qcomb::units {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s, exact

constexpr double hz(double v) { return kTwoPi * v; }
constexpr double khz(double v) { return kTwoPi * v * 1e3; }
constexpr double mhz(double v) { return kTwoPi * v * 1e6; }
constexpr double ghz(double v) { return kTwoPi * v * 1e9; }
constexpr double thz(double v) { return kTwoPi * v * 1e12; }

constexpr double femtoseconds(double v) { return v * 1e-15; }
constexpr double picoseconds(double v) { return v * 1e-12; }

/// Angular frequency of light with vacuum wavelength `meters`.
constexpr double angular_frequency_of_wavelength(double meters) {
  return kTwoPi * kSpeedOfLight / meters;
}

/// Angular-frequency width that corresponds to `width_m` of wavelength
/// around `center_m` (first order).
constexpr double angular_width_of_wavelength_band(double width_m, double center_m) {
  return kTwoPi * kSpeedOfLight * width_m / (center_m * center_m);
}

}  // namespace qcomb::units
