#pragma once

// Simulation units: ion mass m, charge Q, axial frequency nu and the length
// l0 (l0^3 = Q^2 / (m nu^2)) are all 1. Every quantity in the library is a
// pure number relative to these.

namespace ionq {

inline constexpr double kZeta3 = 1.2020569031595943;  // Riemann zeta(3)
inline constexpr double kZeta5 = 1.0369277551433699;  // Riemann zeta(5)

// sqrt(7 zeta(3) / 2), the thermodynamic-limit critical frequency in units
// of omega0 = sqrt(Q^2 / (m a^3)).
inline constexpr double kCriticalFrequencyFactor = 2.0511458166250833;

}  // namespace ionq
