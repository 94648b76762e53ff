#pragma once

// Unit conventions at API boundaries:
//   wavelengths      nm
//   lengths, z       um
//   wavenumbers, dk  rad/um
//   group slowness   fs/um
//   angular freq.    rad/fs

#include <numbers>

namespace qpmsynth::units {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kSpeedOfLightNmPerFs = 299.792458;
inline constexpr double kSpeedOfLightUmPerFs = 0.299792458;

constexpr double nm_to_um(double nm) { return nm * 1e-3; }
constexpr double um_to_nm(double um) { return um * 1e3; }

/// omega = 2 pi c / lambda, in rad/fs.
constexpr double angular_frequency(double wavelength_nm) {
  return kTwoPi * kSpeedOfLightNmPerFs / wavelength_nm;
}

constexpr double wavelength_from_angular_frequency(double omega_rad_per_fs) {
  return kTwoPi * kSpeedOfLightNmPerFs / omega_rad_per_fs;
}

/// Pump wavelength fixed by energy conservation, 1/lp = 1/ls + 1/li.
constexpr double pump_wavelength(double signal_nm, double idler_nm) {
  return 1.0 / (1.0 / signal_nm + 1.0 / idler_nm);
}

/// Partner wavelength on the energy-conservation line of a given pump.
constexpr double conjugate_wavelength(double pump_nm, double partner_nm) {
  return 1.0 / (1.0 / pump_nm - 1.0 / partner_nm);
}

/// Converts a wavelength width about `center_nm` into an angular-frequency
/// width (rad/fs) to first order: dOmega = 2 pi c dlambda / lambda^2.
constexpr double bandwidth_to_angular(double width_nm, double center_nm) {
  return kTwoPi * kSpeedOfLightNmPerFs * width_nm / (center_nm * center_nm);
}

}  // namespace qpmsynth::units
