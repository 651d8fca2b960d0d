#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "bsm/units.hpp"

namespace bsm {

using cplx = std::complex<double>;
inline constexpr cplx kI{0.0, 1.0};

// Thrown for every violated precondition (bad parameters, grid mismatch,
// zero states, ...). The message names the offending quantity.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kNormalizationTolerance = 1e-9;
inline constexpr double kPhysicalTolerance = 1e-6;

// Uniform sampling of angular frequency (rad/s). All joint amplitudes built on
// one grid share its points and trapezoid weights.
class FrequencyGrid {
 public:
  FrequencyGrid(double omega_min, double omega_max, std::size_t n_points)
      : omega_min_(omega_min), omega_max_(omega_max), n_points_(n_points) {
    if (n_points < 2) throw InvalidInput("FrequencyGrid: n_points must be >= 2");
    if (!(omega_min < omega_max) || !std::isfinite(omega_min) || !std::isfinite(omega_max))
      throw InvalidInput("FrequencyGrid: require finite omega_min < omega_max");
    step_ = (omega_max - omega_min) / static_cast<double>(n_points - 1);
    points_.resize(static_cast<Eigen::Index>(n_points));
    weights_.setConstant(static_cast<Eigen::Index>(n_points), step_);
    for (std::size_t i = 0; i < n_points; ++i)
      points_[static_cast<Eigen::Index>(i)] = omega_min + step_ * static_cast<double>(i);
    points_[points_.size() - 1] = omega_max;
    weights_[0] *= 0.5;
    weights_[weights_.size() - 1] *= 0.5;
  }

  static FrequencyGrid centered(double center, double half_width, std::size_t n_points) {
    if (!(half_width > 0.0)) throw InvalidInput("FrequencyGrid: half_width must be > 0");
    return {center - half_width, center + half_width, n_points};
  }

  double omega_min() const { return omega_min_; }
  double omega_max() const { return omega_max_; }
  std::size_t size() const { return n_points_; }
  double step() const { return step_; }
  double omega(std::size_t i) const { return points_[static_cast<Eigen::Index>(i)]; }

  const Eigen::VectorXd& points() const { return points_; }
  // 1D trapezoid weights; the 2D rule uses the outer product.
  const Eigen::VectorXd& weights() const { return weights_; }

  friend bool operator==(const FrequencyGrid& a, const FrequencyGrid& b) {
    return a.omega_min_ == b.omega_min_ && a.omega_max_ == b.omega_max_ &&
           a.n_points_ == b.n_points_;
  }

 private:
  double omega_min_;
  double omega_max_;
  std::size_t n_points_;
  double step_;
  Eigen::VectorXd points_;
  Eigen::VectorXd weights_;
};

inline void require_same_grid(const FrequencyGrid& a, const FrequencyGrid& b, const char* what) {
  if (!(a == b)) throw InvalidInput(std::string(what) + ": frequency grids differ");
}

// F(w, w') sampled on grid x grid; values(i, j) = F(w_i, w_j).
class JointAmplitude {
 public:
  explicit JointAmplitude(FrequencyGrid grid)
      : grid_(std::move(grid)),
        values_(Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(grid_.size()),
                                       static_cast<Eigen::Index>(grid_.size()))) {}

  JointAmplitude(FrequencyGrid grid, Eigen::MatrixXcd values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    const auto n = static_cast<Eigen::Index>(grid_.size());
    if (values_.rows() != n || values_.cols() != n)
      throw InvalidInput("JointAmplitude: value matrix must be n_points x n_points");
  }

  template <typename Fn>
  static JointAmplitude sample(const FrequencyGrid& grid, Fn&& fn) {
    JointAmplitude out(grid);
    const auto n = static_cast<Eigen::Index>(grid.size());
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i)
        out.values_(i, j) = fn(grid.points()[i], grid.points()[j]);
    return out;
  }

  const FrequencyGrid& grid() const { return grid_; }
  std::size_t size() const { return grid_.size(); }
  const Eigen::MatrixXcd& values() const { return values_; }
  Eigen::MatrixXcd& values() { return values_; }
  cplx operator()(std::size_t i, std::size_t j) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  // swap(F)(w, w') = F(w', w)
  JointAmplitude swapped() const { return {grid_, values_.transpose()}; }

  JointAmplitude& operator*=(cplx s) {
    values_ *= s;
    return *this;
  }
  friend JointAmplitude operator*(cplx s, JointAmplitude a) { return a *= s; }
  friend JointAmplitude operator*(JointAmplitude a, cplx s) { return a *= s; }

  friend JointAmplitude operator+(const JointAmplitude& a, const JointAmplitude& b) {
    require_same_grid(a.grid_, b.grid_, "JointAmplitude +");
    return {a.grid_, a.values_ + b.values_};
  }
  friend JointAmplitude operator-(const JointAmplitude& a, const JointAmplitude& b) {
    require_same_grid(a.grid_, b.grid_, "JointAmplitude -");
    return {a.grid_, a.values_ - b.values_};
  }

  // Pointwise product with separable factors: F(w, w') * u(w) * v(w').
  JointAmplitude scaled(const Eigen::VectorXcd& first, const Eigen::VectorXcd& second) const {
    return {grid_, first.asDiagonal() * values_ * second.asDiagonal()};
  }

 private:
  FrequencyGrid grid_;
  Eigen::MatrixXcd values_;
};

inline JointAmplitude swap(const JointAmplitude& f) { return f.swapped(); }

// Trapezoid-rule double integral of conj(a) * b.
inline cplx inner_product(const JointAmplitude& a, const JointAmplitude& b) {
  require_same_grid(a.grid(), b.grid(), "inner_product");
  const Eigen::VectorXd& w = a.grid().weights();
  const Eigen::MatrixXcd prod = a.values().conjugate().cwiseProduct(b.values());
  return (w.transpose().cast<cplx>() * prod * w.cast<cplx>())(0, 0);
}

inline double norm2(const JointAmplitude& a) {
  const Eigen::VectorXd& w = a.grid().weights();
  return w.transpose() * a.values().cwiseAbs2() * w;
}

// Argument order of the stored amplitudes. Both terms are indexed (w_H, w_V):
// f_v1h2(i, j) multiplies a+_V1(w_j) a+_H2(w_i), i.e. its first argument is the
// frequency of the H photon, which travels in path 2.
enum class ArgumentOrder { kOmegaHFirst };

// |psi> = (1/sqrt2) SS dwH dwV { f_h1v2(wH,wV) a+_H1(wH) a+_V2(wV)
//                              + f_v1h2(wH,wV) a+_V1(wV) a+_H2(wH) } |0>
//
// Normalized when (|f_h1v2|^2 + |f_v1h2|^2) / 2 = 1. Construction does not
// enforce it; see normalize().
class TwoPhotonState {
 public:
  static constexpr ArgumentOrder kOrder = ArgumentOrder::kOmegaHFirst;

  TwoPhotonState(JointAmplitude f_h1v2, JointAmplitude f_v1h2)
      : f_h1v2_(std::move(f_h1v2)), f_v1h2_(std::move(f_v1h2)) {
    require_same_grid(f_h1v2_.grid(), f_v1h2_.grid(), "TwoPhotonState");
  }

  const FrequencyGrid& grid() const { return f_h1v2_.grid(); }
  const JointAmplitude& f_h1v2() const { return f_h1v2_; }
  const JointAmplitude& f_v1h2() const { return f_v1h2_; }

  // f_v1h2 re-indexed as (frequency of the path-1 photon, frequency of the
  // path-2 photon).
  JointAmplitude f_v1h2_path_ordered() const { return f_v1h2_.swapped(); }

  double norm2() const { return 0.5 * (bsm::norm2(f_h1v2_) + bsm::norm2(f_v1h2_)); }
  bool is_normalized(double tol = kNormalizationTolerance) const {
    return std::abs(norm2() - 1.0) <= tol;
  }

 private:
  JointAmplitude f_h1v2_;
  JointAmplitude f_v1h2_;
};

inline void require_normalized(const TwoPhotonState& s, const char* what) {
  if (!s.is_normalized())
    throw InvalidInput(std::string(what) + ": state is not normalized (norm^2 = " +
                       std::to_string(s.norm2()) + ")");
}

inline TwoPhotonState normalize(const TwoPhotonState& state) {
  const double n2 = state.norm2();
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw InvalidInput("normalize: zero or non-finite state");
  const double s = 1.0 / std::sqrt(n2);
  return {state.f_h1v2() * cplx(s), state.f_v1h2() * cplx(s)};
}

// Linear polarizer in front of one arm. Predictions are pi-periodic in theta.
struct PolarizerSetting {
  double theta = 0.0;  // rad
  int arm = 1;         // 1 or 2

  PolarizerSetting reduced() const {
    double t = std::fmod(theta, kPi);
    if (t < 0.0) t += kPi;
    if (t >= kPi) t = 0.0;
    return {t, arm};
  }
};

}  // namespace bsm
