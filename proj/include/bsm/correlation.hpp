#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "bsm/beamsplitter.hpp"
#include "bsm/core.hpp"

namespace bsm {

// Probability that analyzers at theta1 (path 1) and theta2 (path 2) both
// transmit, integrated over both detected frequencies:
//   (1/2) SS |cos t1 sin t2 f_h1v2(w1, w2) + sin t1 cos t2 f_v1h2(w2, w1)|^2
// The four outcomes of a complete analyzer basis sum to the state norm (1).
inline double rc_integrated(const TwoPhotonState& state, double theta1, double theta2) {
  const double a = std::cos(theta1) * std::sin(theta2);
  const double b = std::sin(theta1) * std::cos(theta2);
  const Eigen::MatrixXcd amp = a * state.f_h1v2().values() + b * state.f_v1h2().values().transpose();
  const Eigen::VectorXd& w = state.grid().weights();
  return 0.5 * w.dot(amp.cwiseAbs2() * w);
}

inline double rc_integrated(const TwoPhotonState& state, PolarizerSetting p1, PolarizerSetting p2) {
  if (p1.arm != 1 || p2.arm != 2) throw InvalidInput("rc_integrated: expected settings for arms 1 and 2");
  return rc_integrated(state, p1.reduced().theta, p2.reduced().theta);
}

struct CorrelationCurve {
  double theta1 = 0.0;
  std::vector<std::pair<double, double>> samples;  // (theta2, rate)
  // rate ~ offset + amplitude * sin^2(theta2 - phase)
  double offset = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;
  double visibility = 0.0;  // amplitude / (2 offset + amplitude)
  double fit_rms = 0.0;
  bool degenerate = false;  // flat curve, visibility forced to 0
};

// Linear least squares on A + B cos 2t + C sin 2t, which is the same family as
// a + b sin^2(t - c).
inline CorrelationCurve fit_sin2(double theta1, std::vector<std::pair<double, double>> samples) {
  CorrelationCurve out;
  out.theta1 = theta1;
  out.samples = std::move(samples);
  const auto n = static_cast<Eigen::Index>(out.samples.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = out.samples[static_cast<std::size_t>(i)].first;
    design(i, 0) = 1.0;
    design(i, 1) = std::cos(2.0 * t);
    design(i, 2) = std::sin(2.0 * t);
    y[i] = out.samples[static_cast<std::size_t>(i)].second;
  }
  const Eigen::Vector3d c = design.colPivHouseholderQr().solve(y);
  out.fit_rms = std::sqrt((design * c - y).squaredNorm() / static_cast<double>(n));

  const double mean = c[0];
  const double swing = std::hypot(c[1], c[2]);
  if (!(mean > 0.0) || swing <= 1e-12 * mean) {
    out.degenerate = true;
    out.offset = mean;
    return out;
  }
  out.amplitude = 2.0 * swing;
  out.offset = mean - swing;
  out.phase = 0.5 * std::atan2(-c[2], -c[1]);
  out.visibility = swing / mean;
  return out;
}

inline CorrelationCurve correlation_scan(const TwoPhotonState& state, double theta1,
                                         std::span<const double> theta2s) {
  if (theta2s.size() < 4) throw InvalidInput("correlation_scan: need at least 4 angles");
  const auto [lo, hi] = std::minmax_element(theta2s.begin(), theta2s.end());
  if (*hi - *lo < kPi - 1e-12) throw InvalidInput("correlation_scan: theta2 values must span pi");
  std::vector<std::pair<double, double>> samples;
  samples.reserve(theta2s.size());
  for (double t : theta2s) samples.emplace_back(t, rc_integrated(state, theta1, t));
  return fit_sin2(theta1, std::move(samples));
}

inline CorrelationCurve correlation_scan(const TwoPhotonState& state, double theta1,
                                         std::size_t n_angles = 181) {
  const std::vector<double> t = linspace(0.0, kPi, n_angles);
  return correlation_scan(state, theta1, t);
}

// Fringe visibility with analyzer 1 fixed at 45 degrees.
inline double basis45_visibility(const TwoPhotonState& state) {
  return correlation_scan(state, kPi / 4.0).visibility;
}

// Polarization correlation E(alpha, beta) from the four analyzer outcomes;
// orthogonal ports are theta + pi/2.
inline double correlator(const TwoPhotonState& state, double alpha, double beta) {
  const double q = kPi / 2.0;
  const double same = rc_integrated(state, alpha, beta) + rc_integrated(state, alpha + q, beta + q);
  const double diff = rc_integrated(state, alpha, beta + q) + rc_integrated(state, alpha + q, beta);
  const double total = same + diff;
  if (!(total > 0.0)) throw InvalidInput("correlator: no detection probability");
  return (same - diff) / total;
}

struct ChshAngles {
  double a = 0.0;
  double a_prime = kPi / 4.0;
  double b = kPi / 8.0;
  double b_prime = 3.0 * kPi / 8.0;
};

inline double chsh(const TwoPhotonState& state, const ChshAngles& s = {}) {
  return std::abs(correlator(state, s.a, s.b) - correlator(state, s.a, s.b_prime) +
                  correlator(state, s.a_prime, s.b) + correlator(state, s.a_prime, s.b_prime));
}

}  // namespace bsm
