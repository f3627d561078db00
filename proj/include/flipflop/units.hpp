#pragma once

// Unit system used throughout the library:
//   energies     angular frequency, rad/ns (hbar = 1)
//   time         ns
//   fields       kV/m
// User-facing frequencies are cyclic (value / 2pi) in GHz or MHz.

#include <numbers>

namespace flipflop::units {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// CODATA 2018 exact values.
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double hbar = 1.054571817e-34;               // J s

// e * (1 nm) * (1 kV/m) / hbar, in rad/ns.
inline constexpr double field_coupling = elementary_charge * 1e-9 * 1e3 / hbar * 1e-9;

inline constexpr double gamma_e_over_2pi_GHz_per_T = 27.97;
inline constexpr double gamma_n_over_2pi_MHz_per_T = 17.23;
inline constexpr double bulk_hyperfine_over_2pi_MHz = 117.0;

constexpr double from_GHz(double cyclic_GHz) { return two_pi * cyclic_GHz; }
constexpr double from_MHz(double cyclic_MHz) { return two_pi * cyclic_MHz * 1e-3; }
constexpr double to_GHz(double rad_per_ns) { return rad_per_ns / two_pi; }
constexpr double to_MHz(double rad_per_ns) { return rad_per_ns / two_pi * 1e3; }

constexpr double kVm_from_Vm(double v_per_m) { return v_per_m * 1e-3; }

}  // namespace flipflop::units
