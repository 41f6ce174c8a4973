#pragma once

#include "cref/errors.hpp"

namespace cref {

// CODATA 2018 exact values.
inline constexpr double k_boltzmann = 1.380649e-23; // J/K
inline constexpr double q_electron = 1.602176634e-19; // C

inline constexpr double zero_celsius_K = 273.15;
inline constexpr double default_T0 = 298.15; // 25 degC

inline double celsius_to_kelvin(double t_c) { return t_c + zero_celsius_K; }
inline double kelvin_to_celsius(double t_k) { return t_k - zero_celsius_K; }

// U_T = kT/q
inline double thermal_voltage(double T) {
    if (!(T > 0.0))
        throw domain_error("thermal_voltage: T must be positive (K)");
    return k_boltzmann * T / q_electron;
}

} // namespace cref
