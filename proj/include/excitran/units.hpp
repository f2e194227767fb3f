#pragma once

#include <numbers>

namespace excitran::units {

/// Speed of light in cm/ps.
inline constexpr double speed_of_light_cm_per_ps = 2.99792458e-2;

/// Boltzmann constant in cm^-1 / K.
inline constexpr double boltzmann_cm1_per_k = 0.695034800;

/// Wavenumber (cm^-1) to angular frequency (rad/ps), omega = 2 pi c nu.
/// This is the only place where spectroscopic units meet the dynamics; with
/// hbar = 1 every rate downstream is in ps^-1.
inline constexpr double cm1_to_rad_per_ps(double wavenumber) {
  return 2.0 * std::numbers::pi * speed_of_light_cm_per_ps * wavenumber;
}

/// Wavenumber (cm^-1) to ordinary frequency (1/ps), nu = c * wavenumber.
inline constexpr double cm1_to_per_ps(double wavenumber) {
  return speed_of_light_cm_per_ps * wavenumber;
}

}  // namespace excitran::units
