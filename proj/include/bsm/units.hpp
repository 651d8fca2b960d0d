#pragma once

#include <cmath>
#include <numbers>

namespace bsm {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;

inline constexpr double kFemtosecond = 1e-15;
inline constexpr double kNanometer = 1e-9;

// Vacuum wavelength (m) -> angular frequency (rad/s).
inline double angular_frequency(double wavelength) {
  return 2.0 * kPi * kSpeedOfLight / wavelength;
}

// Full width of a narrow band given in wavelength, mapped to angular
// frequency about `center_wavelength` (first order in fwhm / center).
inline double angular_bandwidth(double center_wavelength, double wavelength_width) {
  return 2.0 * kPi * kSpeedOfLight * wavelength_width /
         (center_wavelength * center_wavelength);
}

// Gaussian intensity FWHM -> RMS width of the same intensity profile.
inline double fwhm_to_rms(double fwhm) {
  return fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
}

// Spectral RMS width (of |E(w)|^2) of a transform-limited Gaussian pulse whose
// temporal intensity FWHM is `duration_fwhm`.
inline double pulse_spectral_rms(double duration_fwhm) {
  return std::sqrt(2.0 * std::numbers::ln2) / duration_fwhm;
}

inline constexpr double degrees(double deg) { return deg * kPi / 180.0; }

}  // namespace bsm
