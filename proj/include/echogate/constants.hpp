#pragma once

#include <cmath>

namespace echogate {

// Unit conventions used throughout:
//   energies / Rabi / detunings : angular frequency, rad/us
//   times                       : us
//   lengths                     : um
//   C6 coefficients             : quoted as C6/2pi in THz*um^6 (converted
//                                 to rad/us*um^6 at the point of use)
// User-facing inputs are ordinary frequencies (X/2pi in MHz) and are
// multiplied by 2*pi at the boundary.

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// 1 MHz of ordinary frequency == 2pi rad/us of angular frequency.
inline constexpr double angular_from_mhz(double f_mhz) { return kTwoPi * f_mhz; }
inline constexpr double mhz_from_angular(double w) { return w / kTwoPi; }

// SI constants (CODATA 2018).
inline constexpr double kBoltzmann = 1.380649e-23;          // J/K
inline constexpr double kAtomicMassUnit = 1.66053906660e-27; // kg

// 87Rb, the worked example species.
inline constexpr double kMassRb87Amu = 86.909180527;
inline constexpr double kMassRb87Kg = kMassRb87Amu * kAtomicMassUnit;

// Rydberg excitation wavevectors, rad/um.  Two counterpropagating photons
// at 480/780 nm give the effective k for s/d states; the single-photon UV
// path (~297 nm for Rb) addresses p states directly.
inline double k_eff_two_photon(double lambda1_nm = 480.0, double lambda2_nm = 780.0) {
    return kTwoPi * (1.0e3 / lambda1_nm - 1.0e3 / lambda2_nm);
}
inline double k_eff_single_photon(double lambda_nm = 297.0) {
    return kTwoPi * 1.0e3 / lambda_nm;
}

// r.m.s. thermal speed along one axis, um/us (numerically equal to m/s).
inline double thermal_axial_speed(double temperature_k, double mass_kg) {
    return std::sqrt(kBoltzmann * temperature_k / mass_kg);
}

}  // namespace echogate
