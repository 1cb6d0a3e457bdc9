#pragma once

#include <numbers>
#include <string_view>

namespace opto_spring {

inline constexpr std::string_view kVersion = "0.1.0";

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr double kSpeedOfLight = 299792458.0;     // m/s, exact
inline constexpr double kHbar = 1.054571817e-34;         // J s, CODATA 2018

inline constexpr double hz_to_rad_s(double f) { return kTwoPi * f; }
inline constexpr double rad_s_to_hz(double w) { return w / kTwoPi; }
inline constexpr double deg_to_rad(double d) { return d * kPi / 180.0; }
inline constexpr double rad_to_deg(double r) { return r * 180.0 / kPi; }

}  // namespace opto_spring
