#pragma once

#include <numbers>

namespace phonoscope::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double epsilon0 = 8.8541878128e-12; // F/m
inline constexpr double euler_gamma = std::numbers::egamma;

inline constexpr double gpa = 1e9;
inline constexpr double pm_per_volt = 1e-12;

}  // namespace phonoscope::constants
