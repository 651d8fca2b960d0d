#pragma once

#include <string>

#include "bsm/beamsplitter.hpp"
#include "bsm/core.hpp"
#include "bsm/correlation.hpp"

namespace bsm {

// Exchange antisymmetry residual: the bunching probability at zero delay,
//   (1/4) SS |f_h1v2(wH, wV) + f_v1h2(wH, wV)|^2 = 1 - P_coincidence(0).
// Zero iff f_h1v2 = -f_v1h2 on the grid.
inline double as_residual(const TwoPhotonState& state) {
  require_normalized(state, "as_residual");
  return 0.25 * norm2(state.f_h1v2() + state.f_v1h2());
}

// Path-symmetry residual,
//   (1/2) SS |f_h1v2(w1, w2) + f_v1h2(w2, w1)|^2 = 1 + Re<f_h1v2, swap f_v1h2>,
// twice the probability that analyzers at +45/+45 or -45/-45 both fire.
// 0 iff the path-1 photon has the same spectrum whatever its polarization
// (psi-minus correlations), 1 for orthogonal terms, 2 for the psi-plus analog.
inline double bell_residual(const TwoPhotonState& state) {
  require_normalized(state, "bell_residual");
  return 0.5 * norm2(state.f_h1v2() + state.f_v1h2_path_ordered());
}

enum class SymmetryClass { kAsOnly, kBellOnly, kBoth, kNeither };

inline std::string to_string(SymmetryClass c) {
  switch (c) {
    case SymmetryClass::kAsOnly: return "AS-only";
    case SymmetryClass::kBellOnly: return "Bell-only";
    case SymmetryClass::kBoth: return "Both";
    case SymmetryClass::kNeither: return "Neither";
  }
  return "Neither";
}

struct ClassifyOptions {
  double threshold = 1e-3;
  ChshAngles chsh_angles{};
};

struct SymmetryReport {
  double as_residual = 0.0;
  double bell_residual = 0.0;
  SymmetryClass label = SymmetryClass::kNeither;
  double coincidence_at_zero_delay = 0.0;
  double chsh_value = 0.0;
  double basis45_visibility = 0.0;
  double hv_visibility = 0.0;
};

inline SymmetryClass label_for(double as_res, double bell_res, double threshold) {
  const bool as = as_res < threshold;
  const bool bell = bell_res < threshold;
  if (as && bell) return SymmetryClass::kBoth;
  if (as) return SymmetryClass::kAsOnly;
  if (bell) return SymmetryClass::kBellOnly;
  return SymmetryClass::kNeither;
}

inline SymmetryReport classify(const TwoPhotonState& state, const ClassifyOptions& opt = {}) {
  if (!(opt.threshold > 0.0)) throw InvalidInput("classify: threshold must be > 0");
  SymmetryReport r;
  r.as_residual = as_residual(state);
  r.bell_residual = bell_residual(state);
  r.label = label_for(r.as_residual, r.bell_residual, opt.threshold);
  r.coincidence_at_zero_delay = coincidence_probability(state, 0.0);
  r.chsh_value = chsh(state, opt.chsh_angles);
  r.basis45_visibility = basis45_visibility(state);
  r.hv_visibility = correlation_scan(state, 0.0).visibility;
  return r;
}

}  // namespace bsm
