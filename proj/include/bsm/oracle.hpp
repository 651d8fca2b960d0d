#pragma once

// Discrete-mode brute force for two photons at a 50/50 beamsplitter.
//
// Frequency is cut into K bins; every (path, polarization, bin) triple is one
// bosonic mode. A two-photon state is stored as amplitudes over unordered
// mode pairs {m, n} with m <= n, in the normalized Fock basis:
//   m != n : a+_m a+_n |0>           (= |1_m 1_n>)
//   m == n : (a+_m)^2 / sqrt2 |0>    (= |2_m>)
// The beamsplitter is applied photon by photon to the creation operators, so
// none of the quadrature or closed-form amplitude algebra of the analytic
// modules is reused here.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "bsm/core.hpp"

namespace bsm::oracle {

enum class Pol : int { kH = 0, kV = 1 };

struct Mode {
  int path;  // 1, 2 (inputs) or 3, 4 (outputs)
  Pol pol;
  int bin;
};

inline constexpr int kMaxBins = 128;

class DiscreteModeBasis {
 public:
  // Bin center frequencies: K uniformly spaced points from omega_min to omega_max.
  DiscreteModeBasis(double omega_min, double omega_max, int bins)
      : omega_min_(omega_min), omega_max_(omega_max), bins_(bins) {
    if (bins < 2) throw InvalidInput("DiscreteModeBasis: need at least 2 bins");
    if (bins > kMaxBins) throw InvalidInput("DiscreteModeBasis: at most 128 bins");
    if (!(omega_min < omega_max)) throw InvalidInput("DiscreteModeBasis: empty frequency range");
    const double h = (omega_max - omega_min) / (bins - 1);
    centers_.resize(static_cast<std::size_t>(bins));
    for (int k = 0; k < bins; ++k) centers_[static_cast<std::size_t>(k)] = omega_min + h * k;
    centers_.back() = omega_max;
    const std::size_t m = mode_count();
    amps_.assign(m * (m + 1) / 2, cplx{});
  }

  int bins() const { return bins_; }
  double omega_min() const { return omega_min_; }
  double omega_max() const { return omega_max_; }
  double center(int bin) const { return centers_.at(static_cast<std::size_t>(bin)); }
  std::size_t mode_count() const { return 8 * static_cast<std::size_t>(bins_); }

  std::size_t index(Mode m) const {
    if (m.path < 1 || m.path > 4 || m.bin < 0 || m.bin >= bins_)
      throw InvalidInput("DiscreteModeBasis: mode out of range");
    return (static_cast<std::size_t>(m.path - 1) * 2 + static_cast<std::size_t>(m.pol)) *
               static_cast<std::size_t>(bins_) +
           static_cast<std::size_t>(m.bin);
  }

  Mode mode(std::size_t idx) const {
    const auto k = static_cast<std::size_t>(bins_);
    const std::size_t slot = idx / k;
    return {static_cast<int>(slot / 2) + 1, static_cast<Pol>(slot % 2), static_cast<int>(idx % k)};
  }

  cplx amplitude(Mode a, Mode b) const { return amps_[pair_index(index(a), index(b))]; }
  void set(Mode a, Mode b, cplx v) { amps_[pair_index(index(a), index(b))] = v; }

  cplx& at_indices(std::size_t i, std::size_t j) { return amps_[pair_index(i, j)]; }
  cplx at_indices(std::size_t i, std::size_t j) const { return amps_[pair_index(i, j)]; }

  double norm2() const {
    double s = 0.0;
    for (const cplx& a : amps_) s += std::norm(a);
    return s;
  }

  // Squared norm carried over from the continuous state before renormalizing.
  double captured_norm2() const { return captured_norm2_; }
  void set_captured_norm2(double v) { captured_norm2_ = v; }

  void scale(double s) {
    for (cplx& a : amps_) a *= s;
  }

  // Visits every nonzero pair as (i, j, amplitude) with i <= j.
  template <typename Fn>
  void for_each_pair(Fn&& fn) const {
    const std::size_t m = mode_count();
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i <= j; ++i) {
        const cplx a = amps_[j * (j + 1) / 2 + i];
        if (a != cplx{}) fn(i, j, a);
      }
  }

 private:
  static std::size_t pair_index(std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return j * (j + 1) / 2 + i;
  }

  double omega_min_;
  double omega_max_;
  int bins_;
  std::vector<double> centers_;
  std::vector<cplx> amps_;
  double captured_norm2_ = 1.0;
};

namespace detail {

// Trapezoid weights of an n-point uniform grid over [lo, hi].
inline std::vector<double> trapezoid_weights(double lo, double hi, std::size_t n) {
  const double h = (hi - lo) / static_cast<double>(n - 1);
  std::vector<double> w(n, h);
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

// Nearest coarse point of fine sample i.
inline int bin_of(std::size_t i, std::size_t n_fine, int bins) {
  const double pos = static_cast<double>(i) * (bins - 1) / static_cast<double>(n_fine - 1);
  return static_cast<int>(std::lround(pos));
}

}  // namespace detail

// Projects both joint amplitudes onto K box modes per photon (quadrature-
// weighted aggregation over each bin) and renormalizes. With K equal to the
// grid size every grid point is its own bin.
inline DiscreteModeBasis discretize(const TwoPhotonState& state, int bins) {
  const FrequencyGrid& grid = state.grid();
  const std::size_t n = grid.size();
  if (bins < 2) throw InvalidInput("discretize: K must be >= 2");
  if (static_cast<std::size_t>(bins) > n) throw InvalidInput("discretize: K exceeds the grid size");

  DiscreteModeBasis basis(grid.omega_min(), grid.omega_max(), bins);
  const std::vector<double> w = detail::trapezoid_weights(grid.omega_min(), grid.omega_max(), n);
  std::vector<int> owner(n);
  std::vector<double> bin_weight(static_cast<std::size_t>(bins), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    owner[i] = detail::bin_of(i, n, bins);
    bin_weight[static_cast<std::size_t>(owner[i])] += w[i];
  }

  const auto kb = static_cast<std::size_t>(bins);
  std::vector<cplx> agg_h1v2(kb * kb), agg_v1h2(kb * kb);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t cell = static_cast<std::size_t>(owner[i]) * kb + static_cast<std::size_t>(owner[j]);
      const double ww = w[i] * w[j];
      agg_h1v2[cell] += ww * state.f_h1v2()(i, j);
      agg_v1h2[cell] += ww * state.f_v1h2()(i, j);
    }

  const double inv_sqrt2 = (1.0 / std::numbers::sqrt2);
  for (int kh = 0; kh < bins; ++kh)
    for (int kv = 0; kv < bins; ++kv) {
      const std::size_t cell = static_cast<std::size_t>(kh) * kb + static_cast<std::size_t>(kv);
      const double s = inv_sqrt2 / std::sqrt(bin_weight[static_cast<std::size_t>(kh)] *
                                             bin_weight[static_cast<std::size_t>(kv)]);
      basis.set({1, Pol::kH, kh}, {2, Pol::kV, kv}, s * agg_h1v2[cell]);
      basis.set({1, Pol::kV, kv}, {2, Pol::kH, kh}, s * agg_v1h2[cell]);
    }

  const double n2 = basis.norm2();
  if (!(n2 > 0.0)) throw InvalidInput("discretize: state vanishes after binning");
  basis.scale(1.0 / std::sqrt(n2));
  basis.set_captured_norm2(n2);
  return basis;
}

// Beamsplitter with an optional group delay on input path 1. Annihilation
// operators obey a_out = M a_in with rows (3, 4), columns (1, 2):
//   M = [[i, 1], [1, i]] / sqrt2
// so a+_in = sum_out M(out, in) a+_out.
inline DiscreteModeBasis apply_bs_exact(const DiscreteModeBasis& in, double delay = 0.0) {
  const double r = (1.0 / std::numbers::sqrt2);
  const cplx m[2][2] = {{cplx(0.0, r), cplx(r, 0.0)}, {cplx(r, 0.0), cplx(0.0, r)}};

  struct Term {
    std::size_t mode;
    cplx coeff;
  };
  auto image = [&](std::size_t idx) {
    const Mode src = in.mode(idx);
    if (src.path != 1 && src.path != 2)
      throw InvalidInput("apply_bs_exact: input amplitude on an output path");
    cplx pre = 1.0;
    if (src.path == 1) pre = std::exp(cplx(0.0, in.center(src.bin) * delay));
    const int col = src.path - 1;
    return std::array<Term, 2>{Term{in.index({3, src.pol, src.bin}), pre * m[0][col]},
                               Term{in.index({4, src.pol, src.bin}), pre * m[1][col]}};
  };

  DiscreteModeBasis out(in.omega_min(), in.omega_max(), in.bins());
  out.set_captured_norm2(in.captured_norm2());
  const double sqrt2 = std::numbers::sqrt2;
  in.for_each_pair([&](std::size_t i, std::size_t j, cplx amp) {
    const double pre = (i == j) ? 1.0 / sqrt2 : 1.0;
    const auto a = image(i);
    const auto b = image(j);
    for (const Term& ta : a)
      for (const Term& tb : b) {
        // a+_x a+_y |0> is |1_x 1_y> for x != y and sqrt2 |2_x> for x == y.
        const double fock = (ta.mode == tb.mode) ? sqrt2 : 1.0;
        out.at_indices(ta.mode, tb.mode) += pre * fock * ta.coeff * tb.coeff * amp;
      }
  });
  return out;
}

struct OutcomeProbabilities {
  double coincidence = 0.0;  // one photon in 3, one in 4
  double both_in_3 = 0.0;
  double both_in_4 = 0.0;
  double total() const { return coincidence + both_in_3 + both_in_4; }
};

inline OutcomeProbabilities outcome_probabilities(const DiscreteModeBasis& basis) {
  OutcomeProbabilities p;
  double stray = 0.0;
  basis.for_each_pair([&](std::size_t i, std::size_t j, cplx amp) {
    const int pa = basis.mode(i).path, pb = basis.mode(j).path;
    const double prob = std::norm(amp);
    if (pa == 3 && pb == 3) p.both_in_3 += prob;
    else if (pa == 4 && pb == 4) p.both_in_4 += prob;
    else if ((pa == 3 && pb == 4) || (pa == 4 && pb == 3)) p.coincidence += prob;
    else stray += prob;
  });
  if (stray > 0.0) throw InvalidInput("outcome_probabilities: basis still has photons on input paths");
  return p;
}

// Inverse of discretize for an input-path basis: a TwoPhotonState on the
// K-point grid of bin centers whose trapezoid integrals reproduce the pair
// amplitudes exactly.
inline TwoPhotonState lift_to_state(const DiscreteModeBasis& basis) {
  const int k = basis.bins();
  const auto kk = static_cast<std::size_t>(k);
  const std::vector<double> w = detail::trapezoid_weights(basis.omega_min(), basis.omega_max(), kk);
  FrequencyGrid grid(basis.omega_min(), basis.omega_max(), kk);
  JointAmplitude f1(grid), f2(grid);
  double other = 0.0;
  basis.for_each_pair([&](std::size_t i, std::size_t j, cplx amp) {
    const Mode a = basis.mode(i), b = basis.mode(j);
    const bool hv = a.pol != b.pol && ((a.path == 1 && b.path == 2) || (a.path == 2 && b.path == 1));
    if (!hv) other += std::norm(amp);
  });
  if (other > 0.0) throw InvalidInput("lift_to_state: basis has amplitude outside the H1V2/V1H2 terms");
  for (int kh = 0; kh < k; ++kh)
    for (int kv = 0; kv < k; ++kv) {
      const double s = std::numbers::sqrt2 / std::sqrt(w[static_cast<std::size_t>(kh)] *
                                                       w[static_cast<std::size_t>(kv)]);
      f1.values()(kh, kv) = s * basis.amplitude({1, Pol::kH, kh}, {2, Pol::kV, kv});
      f2.values()(kh, kv) = s * basis.amplitude({1, Pol::kV, kv}, {2, Pol::kH, kh});
    }
  return {std::move(f1), std::move(f2)};
}

// Coincidence probability by brute force: discretize, split, count.
inline double coincidence_probability(const TwoPhotonState& state, int bins, double delay = 0.0) {
  return outcome_probabilities(apply_bs_exact(discretize(state, bins), delay)).coincidence;
}

}  // namespace bsm::oracle
