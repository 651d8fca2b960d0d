// Two sources that both give a coincidence peak at zero delay.  Only one of
// them carries polarization entanglement.

#include <cstdio>

#include "bsm/bsm.hpp"

int main() {
  using namespace bsm;

  // Color tied to polarization: antisymmetric under exchange, no Bell correlations.
  const double red = angular_frequency(790 * kNanometer);
  const double blue = angular_frequency(770 * kNanometer);
  const TwoPhotonState product = build_two_color(TwoColorCase::kColorWithPolarization, red, blue, 5e12,
                                                 two_color_grid(red, blue, 5e12));
  // Identical spectra in both paths: psi-minus.
  const FrequencyGrid grid = FrequencyGrid::centered(angular_frequency(780 * kNanometer), 6e13, 256);
  const SpectralEnvelope g = SpectralEnvelope::gaussian(grid, angular_frequency(780 * kNanometer), 1e13);
  const TwoPhotonState singlet = build_bell_psi_minus(g, g);

  for (const auto& [name, state] : {std::pair{"two-color", &product}, std::pair{"psi-minus", &singlet}}) {
    const SymmetryReport r = classify(*state);
    std::printf("%-10s  P_cc(0)=%.4f  as_residual=%.2e  bell_residual=%.3f  S=%.4f  label=%s\n", name,
                r.coincidence_at_zero_delay, r.as_residual, r.bell_residual, r.chsh_value,
                to_string(r.label).c_str());
  }
  return 0;
}
