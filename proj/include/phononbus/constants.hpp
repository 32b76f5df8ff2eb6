#pragma once

namespace phononbus {

// 2018/2019 CODATA values, SI units.  The library defaults to natural units
// (hbar = M = e = omega_x = 1); these are only needed when a caller sets up
// a trap in SI units.
namespace si {
inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double atomic_mass_unit = 1.66053906660e-27; // kg
inline constexpr double epsilon0 = 8.8541878128e-12;     // F/m
}  // namespace si

inline constexpr double pi = 3.14159265358979323846;

}  // namespace phononbus
