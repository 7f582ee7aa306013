#ifndef QKR_CONSTANTS_HPP
#define QKR_CONSTANTS_HPP

namespace qkr::constants {

// CODATA 2018
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double k_boltzmann = 1.380649e-23;    // J/K
inline constexpr double c_light_cm = 2.9979245800e10;  // cm/s
inline constexpr double epsilon0 = 8.8541878128e-12;   // F/m

// hc/k_B in cm*K; converts B[cm^-1] * J(J+1) to a temperature scale.
inline constexpr double hc_over_kB_cmK = 1.4387768775039337;

} // namespace qkr::constants

#endif
