#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "bsm/core.hpp"
#include "bsm/units.hpp"

namespace bsm {

// Gaussian amplitude whose intensity |g|^2 has RMS width `sigma` about `center`.
inline double gaussian_amplitude(double omega, double center, double sigma) {
  const double x = omega - center;
  return std::exp(-x * x / (4.0 * sigma * sigma));
}

// Single-photon spectral amplitude sampled on a grid.
struct SpectralEnvelope {
  FrequencyGrid grid;
  Eigen::VectorXcd values;

  // Gaussian centered at `center` (rad/s), RMS intensity width `sigma`,
  // group delay `delay` (s) carried as exp(i w delay).
  static SpectralEnvelope gaussian(const FrequencyGrid& grid, double center, double sigma,
                                   double delay = 0.0) {
    if (!(sigma > 0.0)) throw InvalidInput("SpectralEnvelope: sigma must be > 0");
    Eigen::VectorXcd v(static_cast<Eigen::Index>(grid.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double w = grid.points()[i];
      v[i] = gaussian_amplitude(w, center, sigma) * std::exp(kI * (w * delay));
    }
    SpectralEnvelope env{grid, std::move(v)};
    return env.normalized();
  }

  double norm2() const { return grid.weights().dot(values.cwiseAbs2()); }

  SpectralEnvelope normalized() const {
    const double n2 = norm2();
    if (!(n2 > 0.0)) throw InvalidInput("SpectralEnvelope: zero envelope");
    return {grid, values / std::sqrt(n2)};
  }
};

// Product amplitude g1(w) g2(w').
inline JointAmplitude outer(const SpectralEnvelope& g1, const SpectralEnvelope& g2) {
  require_same_grid(g1.grid, g2.grid, "outer");
  return {g1.grid, g1.values * g2.values.transpose()};
}

// Rejects amplitudes that are still significant on the grid boundary.
inline void check_grid_coverage(const JointAmplitude& f, const char* what,
                                double edge_fraction = 1e-3) {
  const Eigen::MatrixXd mag = f.values().cwiseAbs();
  const double peak = mag.maxCoeff();
  if (!(peak > 0.0)) throw InvalidInput(std::string(what) + ": amplitude vanishes on the grid");
  const Eigen::Index n = mag.rows();
  const double edge = std::max({mag.row(0).maxCoeff(), mag.row(n - 1).maxCoeff(),
                                mag.col(0).maxCoeff(), mag.col(n - 1).maxCoeff()});
  if (edge > edge_fraction * peak)
    throw InvalidInput(std::string(what) + ": grid too narrow, edge amplitude is " +
                       std::to_string(edge / peak) + " of peak (limit " +
                       std::to_string(edge_fraction) + ")");
}

// Ultrafast-pumped type-II source after the quartz plates, without temporal
// compensation. Frequencies in rad/s, times in s.
struct SpdcParams {
  double pump_center_wavelength = 390.0 * kNanometer;
  double pump_duration_fwhm = 120.0 * kFemtosecond;
  double sigma_h = 2.0e13;  // o-ray photon
  double sigma_v = 1.0e13;  // e-ray photon
  double t_h = 0.0;
  double t_v = 400.0 * kFemtosecond;  // walk-off t_V - t_H of crystal plus quartz
  double phi = kPi;                   // relative phase of the V1 H2 term
  double extra_group_delay_arm2 = 0.0;

  double degenerate_center() const { return 0.5 * angular_frequency(pump_center_wavelength); }
  double pump_sigma() const { return pulse_spectral_rms(pump_duration_fwhm); }

  void validate() const {
    if (!(sigma_h > 0.0) || !(sigma_v > 0.0))
      throw InvalidInput("SpdcParams: sigma_H and sigma_V must be > 0");
    if (!(pump_duration_fwhm > 0.0))
      throw InvalidInput("SpdcParams: pump_duration_fwhm must be > 0");
    if (!(pump_center_wavelength > 0.0))
      throw InvalidInput("SpdcParams: pump_center_wavelength must be > 0");
  }
};

enum class FilterShape { kGaussian, kTophat };

struct FilterParams {
  double center_wavelength = 780.0 * kNanometer;
  double fwhm = 20.0 * kNanometer;  // in wavelength
  FilterShape shape = FilterShape::kGaussian;
};

// Grid centered on the degenerate frequency, +/- half_width_sigmas times the
// broader photon bandwidth.
inline FrequencyGrid default_grid(const SpdcParams& p, std::size_t n_points = 256,
                                  double half_width_sigmas = 6.0) {
  p.validate();
  return FrequencyGrid::centered(p.degenerate_center(),
                                 half_width_sigmas * std::max(p.sigma_h, p.sigma_v), n_points);
}

inline TwoPhotonState build_type2_ultrafast(const SpdcParams& p, const FrequencyGrid& grid) {
  p.validate();
  const double w0 = p.degenerate_center();
  const double sp = p.pump_sigma();
  const JointAmplitude f = JointAmplitude::sample(grid, [&](double wh, double wv) {
    return gaussian_amplitude(wh, w0, p.sigma_h) * gaussian_amplitude(wv, w0, p.sigma_v) *
           gaussian_amplitude(wh + wv, 2.0 * w0, sp) * std::exp(kI * (wh * p.t_h + wv * p.t_v));
  });
  check_grid_coverage(f, "build_type2_ultrafast");

  // Arm-2 delay rides on the V photon in the first term, on H in the second.
  Eigen::VectorXcd delay2(static_cast<Eigen::Index>(grid.size()));
  for (Eigen::Index i = 0; i < delay2.size(); ++i)
    delay2[i] = std::exp(kI * (grid.points()[i] * p.extra_group_delay_arm2));
  const Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(delay2.size());

  JointAmplitude f_h1v2 = f.scaled(ones, delay2);
  JointAmplitude f_v1h2 = f.scaled(delay2, ones) * std::exp(-kI * p.phi);
  return normalize({std::move(f_h1v2), std::move(f_v1h2)});
}

// f_h1v2 = F, f_v1h2 = -F on the shared (wH, wV) indexing, so every exchange
// pair of bunching amplitudes cancels exactly.
inline TwoPhotonState build_antisymmetric(const JointAmplitude& envelope) {
  if (!(norm2(envelope) > 0.0)) throw InvalidInput("build_antisymmetric: zero envelope");
  return normalize({envelope, envelope * cplx(-1.0)});
}

// Plus-sign companion of build_antisymmetric; always bunches when F is
// exchange symmetric.
inline TwoPhotonState build_symmetric(const JointAmplitude& envelope) {
  if (!(norm2(envelope) > 0.0)) throw InvalidInput("build_symmetric: zero envelope");
  return normalize({envelope, envelope});
}

// Path-correlated psi-minus: the path-1 photon carries g1 and the path-2
// photon carries g2 whatever their polarizations.
inline TwoPhotonState build_bell_psi_minus(const SpectralEnvelope& g1, const SpectralEnvelope& g2) {
  require_same_grid(g1.grid, g2.grid, "build_bell_psi_minus");
  JointAmplitude f_h1v2{g1.grid, g1.values * g2.values.transpose()};
  JointAmplitude f_v1h2{g1.grid, -(g2.values * g1.values.transpose())};
  if (!(norm2(f_h1v2) > 0.0)) throw InvalidInput("build_bell_psi_minus: zero envelope");
  return normalize({std::move(f_h1v2), std::move(f_v1h2)});
}

enum class TwoColorCase {
  kColorWithPolarization,  // case i: H always red, V always blue
  kColorWithPath,          // case ii: path 1 always red, path 2 always blue
};

inline FrequencyGrid two_color_grid(double red_center, double blue_center, double bandwidth,
                                    std::size_t n_points = 256, double half_width_sigmas = 6.0) {
  if (!(bandwidth > 0.0)) throw InvalidInput("two_color_grid: bandwidth must be > 0");
  return FrequencyGrid::centered(0.5 * (red_center + blue_center),
                                 0.5 * std::abs(blue_center - red_center) +
                                     half_width_sigmas * bandwidth,
                                 n_points);
}

inline TwoPhotonState build_two_color(TwoColorCase which, double red_center, double blue_center,
                                      double bandwidth, const FrequencyGrid& grid) {
  if (!(bandwidth > 0.0)) throw InvalidInput("build_two_color: bandwidth must be > 0");
  if (!(std::abs(red_center - blue_center) > 10.0 * bandwidth))
    throw InvalidInput("build_two_color: colors must be separated by more than 10 bandwidths");
  const auto red = SpectralEnvelope::gaussian(grid, red_center, bandwidth);
  const auto blue = SpectralEnvelope::gaussian(grid, blue_center, bandwidth);

  TwoPhotonState state = [&]() -> TwoPhotonState {
    if (which == TwoColorCase::kColorWithPath) return build_bell_psi_minus(red, blue);
    // (|H_R>1 |V_B>2 - |V_B>1 |H_R>2)/sqrt2
    const JointAmplitude f = outer(red, blue);
    return normalize({f, f * cplx(-1.0)});
  }();
  check_grid_coverage(state.f_h1v2(), "build_two_color");
  check_grid_coverage(state.f_v1h2(), "build_two_color");
  return state;
}

// Amplitude transmission of one filter at angular frequency w.
inline double filter_transmission(const FilterParams& f, double omega) {
  const double wc = angular_frequency(f.center_wavelength);
  const double width = angular_bandwidth(f.center_wavelength, f.fwhm);
  switch (f.shape) {
    case FilterShape::kGaussian:
      return gaussian_amplitude(omega, wc, fwhm_to_rms(width));
    case FilterShape::kTophat:
      return std::abs(omega - wc) <= 0.5 * width ? 1.0 : 0.0;
  }
  return 0.0;
}

inline TwoPhotonState apply_filters(const TwoPhotonState& state, const FilterParams& f) {
  if (!(f.fwhm > 0.0)) throw InvalidInput("apply_filters: fwhm must be > 0");
  if (!(f.center_wavelength > 0.0)) throw InvalidInput("apply_filters: center must be > 0");
  const FrequencyGrid& grid = state.grid();
  const double wc = angular_frequency(f.center_wavelength);
  if (wc < grid.omega_min() || wc > grid.omega_max())
    throw InvalidInput("apply_filters: filter center lies outside the frequency grid");

  Eigen::VectorXcd t(static_cast<Eigen::Index>(grid.size()));
  for (Eigen::Index i = 0; i < t.size(); ++i) t[i] = filter_transmission(f, grid.points()[i]);
  if (t.cwiseAbs().maxCoeff() == 0.0)
    throw InvalidInput("apply_filters: filter passband misses every grid point");

  return normalize({state.f_h1v2().scaled(t, t), state.f_v1h2().scaled(t, t)});
}

}  // namespace bsm
