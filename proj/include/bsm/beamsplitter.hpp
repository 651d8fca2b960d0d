#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "bsm/core.hpp"

namespace bsm {

// Input modes 1, 2 and output modes 3, 4 of a lossless 50/50 beamsplitter,
// per polarization j:
//   a_j3 = (a_j2 + i a_j1) / sqrt2,   a_j4 = (a_j1 + i a_j2) / sqrt2.
// Path 1 is transmitted to 4 and reflected (factor i) to 3; path 2 is
// transmitted to 3 and reflected to 4.

namespace detail {

inline Eigen::VectorXcd phase_ramp(const FrequencyGrid& grid, double delay) {
  Eigen::VectorXcd p(static_cast<Eigen::Index>(grid.size()));
  for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = std::exp(kI * (grid.points()[i] * delay));
  return p;
}

}  // namespace detail

// Group delay on one input path: every single-photon factor travelling in
// that path picks up exp(i w delay). Positive delay retards the path.
inline TwoPhotonState delay_path(const TwoPhotonState& state, int path, double delay) {
  if (path != 1 && path != 2) throw InvalidInput("delay_path: path must be 1 or 2");
  if (delay == 0.0) return state;
  const Eigen::VectorXcd p = detail::phase_ramp(state.grid(), delay);
  const Eigen::VectorXcd one = Eigen::VectorXcd::Ones(p.size());
  // f_h1v2: H (first index) in path 1.  f_v1h2: V (second index) in path 1.
  if (path == 1) return {state.f_h1v2().scaled(p, one), state.f_v1h2().scaled(one, p)};
  return {state.f_h1v2().scaled(one, p), state.f_v1h2().scaled(p, one)};
}

// Output state in the (wH, wV) indexing, coefficients of the normalized
// output ket:
//   a43 * a+_H4 a+_V3 + a34 * a+_H3 a+_V4 + b33 * a+_H3 a+_V3 + b44 * a+_H4 a+_V4
struct BsOutputState {
  JointAmplitude a43;
  JointAmplitude a34;
  JointAmplitude b33;
  JointAmplitude b44;

  double coincidence() const { return norm2(a43) + norm2(a34); }
  double both_in_3() const { return norm2(b33); }
  double both_in_4() const { return norm2(b44); }
  double total() const { return coincidence() + both_in_3() + both_in_4(); }
};

inline BsOutputState bs_transform(const TwoPhotonState& state, double delay = 0.0) {
  const TwoPhotonState s = delay_path(state, 1, delay);
  const cplx k = 0.5 * (1.0 / std::numbers::sqrt2);  // (1/sqrt2 state) * (1/2 from two splittings)
  JointAmplitude diff = s.f_h1v2() - s.f_v1h2();
  JointAmplitude sum = s.f_h1v2() + s.f_v1h2();
  return {diff * k, diff * (-k), sum * (kI * k), sum * (kI * k)};
}

// Probability that one photon leaves through each output port.
//
// mode_overlap (epsilon in [0, 1]) scales only the interference term:
// P = background + epsilon * (P_ideal - background).
inline double coincidence_probability(const TwoPhotonState& state, double delay = 0.0,
                                      double mode_overlap = 1.0) {
  if (!(mode_overlap >= 0.0 && mode_overlap <= 1.0))
    throw InvalidInput("coincidence_probability: mode_overlap must lie in [0, 1]");
  const Eigen::VectorXcd p = detail::phase_ramp(state.grid(), delay);
  const Eigen::VectorXcd one = Eigen::VectorXcd::Ones(p.size());
  const JointAmplitude diff = state.f_h1v2().scaled(p, one) - state.f_v1h2().scaled(one, p);
  const double ideal = 0.25 * norm2(diff);
  if (mode_overlap == 1.0) return ideal;
  const double background = 0.5 * state.norm2();
  return background + mode_overlap * (ideal - background);
}

// Longest marginal coherence time 1 / sigma_min, where sigma_min is the
// smallest RMS bandwidth among the four single-photon marginals (each term,
// each argument) of the joint intensity.
inline double coherence_time(const TwoPhotonState& state) {
  const FrequencyGrid& g = state.grid();
  const Eigen::VectorXd& w = g.weights();
  const Eigen::VectorXd& x = g.points();
  double sigma_min = std::numeric_limits<double>::infinity();
  auto consider = [&](const Eigen::VectorXd& marginal) {
    const double mass = w.dot(marginal);
    if (!(mass > 0.0)) return;
    const double mean = w.dot(marginal.cwiseProduct(x)) / mass;
    const Eigen::VectorXd dx = x.array() - mean;
    const double var = w.dot(marginal.cwiseProduct(dx.cwiseAbs2())) / mass;
    sigma_min = std::min(sigma_min, std::sqrt(var));
  };
  for (const JointAmplitude* f : {&state.f_h1v2(), &state.f_v1h2()}) {
    const Eigen::MatrixXd intensity = f->values().cwiseAbs2();
    consider(intensity * w);               // first argument
    consider(intensity.transpose() * w);   // second argument
  }
  if (!std::isfinite(sigma_min) || !(sigma_min > 0.0))
    throw InvalidInput("coherence_time: state has no resolvable bandwidth");
  return 1.0 / sigma_min;
}

struct ScanSample {
  double delay;  // s
  double rate;   // coincidence probability
};

struct DelayScanCurve {
  std::vector<ScanSample> samples;
  double background = 0.0;
  double extremum = 0.0;
  double extremum_delay = 0.0;
  double visibility = 0.0;
  double feature_fwhm = 0.0;  // width of |rate - background| at half height; 0 when flat
  bool has_feature() const { return visibility > kFlatVisibility; }
  bool is_peak() const { return has_feature() && extremum > background; }
  bool is_dip() const { return has_feature() && extremum < background; }

  static constexpr double kFlatVisibility = 1e-6;
};

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) throw InvalidInput("linspace: need at least 2 samples");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  out.back() = hi;
  return out;
}

inline DelayScanCurve delay_scan(const TwoPhotonState& state, std::span<const double> delays,
                                 double mode_overlap = 1.0) {
  if (delays.size() < 20) throw InvalidInput("delay_scan: need at least 20 delay samples");
  if (!std::is_sorted(delays.begin(), delays.end()) ||
      std::adjacent_find(delays.begin(), delays.end()) != delays.end())
    throw InvalidInput("delay_scan: delays must be strictly increasing");
  const double tc = coherence_time(state);
  if (delays.front() > -10.0 * tc || delays.back() < 10.0 * tc)
    throw InvalidInput("delay_scan: delays must span at least +/-10 coherence times (" +
                       std::to_string(10.0 * tc) + " s)");

  DelayScanCurve curve;
  curve.samples.reserve(delays.size());
  for (double d : delays) curve.samples.push_back({d, coincidence_probability(state, d, mode_overlap)});

  const std::size_t n = curve.samples.size();
  const std::size_t edge = std::max<std::size_t>(1, n / 20);  // outer 10% in total
  double acc = 0.0;
  for (std::size_t i = 0; i < edge; ++i) acc += curve.samples[i].rate + curve.samples[n - 1 - i].rate;
  curve.background = acc / static_cast<double>(2 * edge);

  std::size_t k = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(curve.samples[i].rate - curve.background) >
        std::abs(curve.samples[k].rate - curve.background))
      k = i;
  const double sign = curve.samples[k].rate >= curve.background ? 1.0 : -1.0;

  // Golden-section refinement between the neighbouring samples.
  double lo = curve.samples[k > 0 ? k - 1 : k].delay;
  double hi = curve.samples[k + 1 < n ? k + 1 : k].delay;
  auto excess = [&](double d) { return sign * coincidence_probability(state, d, mode_overlap); };
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
  double f1 = excess(x1), f2 = excess(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-24; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = excess(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = excess(x1);
    }
  }
  const double refined = 0.5 * (lo + hi);
  const double refined_rate = coincidence_probability(state, refined, mode_overlap);
  if (sign * refined_rate >= sign * curve.samples[k].rate) {
    curve.extremum_delay = refined;
    curve.extremum = refined_rate;
  } else {
    curve.extremum_delay = curve.samples[k].delay;
    curve.extremum = curve.samples[k].rate;
  }
  curve.visibility =
      curve.background > 0.0 ? std::abs(curve.extremum - curve.background) / curve.background : 0.0;

  const double half = 0.5 * std::abs(curve.extremum - curve.background);
  auto height = [&](std::size_t i) { return std::abs(curve.samples[i].rate - curve.background); };
  auto crossing = [&](std::size_t inside, std::size_t outside) {
    const double h_in = height(inside), h_out = height(outside);
    const double t = (h_in - half) / (h_in - h_out);
    return curve.samples[inside].delay +
           t * (curve.samples[outside].delay - curve.samples[inside].delay);
  };
  if (curve.has_feature()) {
    std::size_t l = k, r = k;
    while (l > 0 && height(l - 1) >= half) --l;
    while (r + 1 < n && height(r + 1) >= half) ++r;
    const double left = l > 0 ? crossing(l, l - 1) : curve.samples.front().delay;
    const double right = r + 1 < n ? crossing(r, r + 1) : curve.samples.back().delay;
    curve.feature_fwhm = right - left;
  }
  return curve;
}

// Four coincidence alternatives. Emission term 1 (H1 V2): psi1 both
// transmitted (H->4, V->3), psi2 both reflected (H->3, V->4). Emission term 2
// (V1 H2): psi3 both transmitted (V->4, H->3), psi4 both reflected (V->3, H->4).
// psi1 + psi4 = a43 and psi2 + psi3 = a34.
struct FeynmanDecomposition {
  JointAmplitude psi1;
  JointAmplitude psi2;
  JointAmplitude psi3;
  JointAmplitude psi4;
  double overlap_14 = 0.0;  // |<psi1, psi4>| / (|psi1| |psi4|)
  double overlap_23 = 0.0;
};

inline double normalized_overlap(const JointAmplitude& a, const JointAmplitude& b) {
  const double na = norm2(a), nb = norm2(b);
  if (!(na > 0.0) || !(nb > 0.0)) return 0.0;
  return std::abs(inner_product(a, b)) / std::sqrt(na * nb);
}

inline FeynmanDecomposition feynman_decomposition(const TwoPhotonState& state, double delay = 0.0) {
  const TwoPhotonState s = delay_path(state, 1, delay);
  const cplx k = 0.5 * (1.0 / std::numbers::sqrt2);
  const cplx t = 1.0, r = kI;  // transmission, reflection amplitude (times 1/sqrt2 each)
  FeynmanDecomposition out{s.f_h1v2() * (t * t * k), s.f_h1v2() * (r * r * k),
                           s.f_v1h2() * (t * t * k), s.f_v1h2() * (r * r * k)};
  out.overlap_14 = normalized_overlap(out.psi1, out.psi4);
  out.overlap_23 = normalized_overlap(out.psi2, out.psi3);
  return out;
}

}  // namespace bsm
