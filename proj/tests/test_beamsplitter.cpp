#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "bsm/beamsplitter.hpp"
#include "bsm/sources.hpp"
#include "support/generators.hpp"
#include "support/reference.hpp"

using namespace bsm;

namespace {

const double kW0 = angular_frequency(780.0 * kNanometer);
const double kSigma = 1e13;

FrequencyGrid grid(std::size_t n = 128) { return FrequencyGrid::centered(kW0, 8 * kSigma, n); }

JointAmplitude identical_pair(const FrequencyGrid& g) {
  const auto e = SpectralEnvelope::gaussian(g, kW0, kSigma);
  return outer(e, e);
}

TwoPhotonState preset(double phi, double arm2 = 0.0) {
  SpdcParams p;
  p.phi = phi;
  p.extra_group_delay_arm2 = arm2;
  return apply_filters(build_type2_ultrafast(p, default_grid(p)), FilterParams{});
}

std::vector<double> scan_axis(const TwoPhotonState& s, double spans = 25.0, std::size_t n = 601) {
  const double tc = coherence_time(s);
  return linspace(-spans * tc, spans * tc, n);
}

double peak_abs(const JointAmplitude& f) { return f.values().cwiseAbs().maxCoeff(); }

}  // namespace

TEST(BsTransform, PsiMinusNeverBunches) {
  const auto e = SpectralEnvelope::gaussian(grid(), kW0, kSigma, 40e-15);
  const BsOutputState out = bs_transform(build_bell_psi_minus(e, e));
  EXPECT_EQ(peak_abs(out.b33), 0.0);
  EXPECT_EQ(peak_abs(out.b44), 0.0);
  EXPECT_NEAR(out.coincidence(), 1.0, 1e-12);
}

TEST(BsTransform, PsiPlusAnalogNeverSplits) {
  const BsOutputState out = bs_transform(build_symmetric(identical_pair(grid())));
  EXPECT_EQ(peak_abs(out.a43), 0.0);
  EXPECT_EQ(peak_abs(out.a34), 0.0);
  EXPECT_NEAR(out.both_in_3(), 0.5, 1e-12);
  EXPECT_NEAR(out.both_in_4(), 0.5, 1e-12);
}

TEST(BsTransform, CoincidenceAmplitudesAreOppositeAndBunchedEqual) {
  gen::Rng rng(gen::kSeed + 20);
  const TwoPhotonState s = gen::any_state(rng);
  const BsOutputState out = bs_transform(s, 70e-15);
  EXPECT_EQ(peak_abs(out.a43 + out.a34), 0.0);
  EXPECT_EQ(peak_abs(out.b33 - out.b44), 0.0);
}

TEST(BsTransform, UnitarityOnRandomStates) {
  gen::Rng rng(gen::kSeed + 21);
  for (int k = 0; k < 1000; ++k) {
    const TwoPhotonState s = (k % 2) ? gen::any_state(rng, 32) : gen::type2_state(rng, 32);
    const double tau = gen::uniform(rng, -1e-12, 1e-12);
    const BsOutputState out = bs_transform(s, tau);
    ASSERT_NEAR(out.total(), 1.0, 1e-9) << "case " << k;
    ASSERT_NEAR(out.coincidence(), coincidence_probability(s, tau), 1e-12) << "case " << k;
  }
}

TEST(Coincidence, MatchesReferenceQuadrature) {
  gen::Rng rng(gen::kSeed + 22);
  for (int k = 0; k < 30; ++k) {
    const TwoPhotonState s = (k % 2) ? gen::any_state(rng) : gen::type2_state(rng);
    const double tau = gen::uniform(rng, -5e-13, 5e-13);
    EXPECT_NEAR(coincidence_probability(s, tau), ref::coincidence(s, tau), 1e-12) << "case " << k;
  }
}

TEST(Coincidence, GaussianPairClosedForm) {
  const FrequencyGrid g = grid(256);
  const TwoPhotonState as = build_antisymmetric(identical_pair(g));
  const TwoPhotonState sym = build_symmetric(identical_pair(g));
  for (double tau : {0.0, 20e-15, 60e-15, 100e-15, 300e-15, -45e-15}) {
    EXPECT_NEAR(coincidence_probability(as, tau), ref::gaussian_pair_coincidence(-1.0, kSigma, tau), 1e-9);
    EXPECT_NEAR(coincidence_probability(sym, tau), ref::gaussian_pair_coincidence(+1.0, kSigma, tau), 1e-9);
  }
}

TEST(Coincidence, AntisymmetricIsUnitAndSymmetricIsZero) {
  gen::Rng rng(gen::kSeed + 23);
  for (int k = 0; k < 10; ++k) EXPECT_NEAR(coincidence_probability(build_antisymmetric(gen::envelope(rng))), 1.0, 1e-6);
  EXPECT_NEAR(coincidence_probability(build_symmetric(identical_pair(grid()))), 0.0, 1e-6);
}

TEST(Coincidence, BackgroundFarFromOverlap) {
  for (const TwoPhotonState& s : {preset(kPi), preset(0.0, 100e-15)}) {
    const double tc = coherence_time(s);
    EXPECT_NEAR(coincidence_probability(s, 50 * tc), 0.5, 0.01);
    EXPECT_NEAR(coincidence_probability(s, -50 * tc), 0.5, 0.01);
  }
  // The quadrature is periodic in delay with period 2 pi / step, so the grid
  // is refined until that period clears the probed delay plus emission offsets.
  gen::Rng rng(gen::kSeed + 24);
  for (int k = 0; k < 20; ++k) {
    const SpdcParams p = gen::spdc_params(rng);
    const FrequencyGrid coarse = default_grid(p, 64);
    const double tc = coherence_time(build_type2_ultrafast(p, coarse));
    const double span = coarse.step() * 63.0;
    const double needed = 2.0 * (50.0 * tc + 2e-12);
    const auto n = static_cast<std::size_t>(std::ceil(span * needed / (2.0 * kPi))) + 1;
    const TwoPhotonState s = build_type2_ultrafast(p, default_grid(p, std::max<std::size_t>(n, 128)));
    EXPECT_NEAR(coincidence_probability(s, 50 * coherence_time(s)), 0.5, 0.01) << "case " << k << " n=" << n;
  }
}

TEST(Coincidence, ModeOverlapScalesInterferenceOnly) {
  const TwoPhotonState s = preset(kPi);
  for (double eps : {0.0, 0.3, 0.91, 1.0}) {
    for (double tau : {0.0, 30e-15, 1e-12}) {
      const double ideal = coincidence_probability(s, tau);
      EXPECT_NEAR(coincidence_probability(s, tau, eps), 0.5 + eps * (ideal - 0.5), 1e-12);
    }
  }
  EXPECT_THROW(coincidence_probability(s, 0.0, 1.2), InvalidInput);
  EXPECT_THROW(coincidence_probability(s, 0.0, -0.1), InvalidInput);
}

// f_v1h2 = exp(-i phi) g with <f, g> = K real:  P(0) = (1 - K cos phi) / 2.
TEST(Coincidence, PeakDipComplementarity) {
  gen::Rng rng(gen::kSeed + 25);
  for (int k = 0; k < 10; ++k) {
    const JointAmplitude f0 = gen::envelope(rng);
    JointAmplitude g0 = f0 + gen::envelope(rng) * cplx(gen::uniform(rng, 0.0, 1.0));
    const JointAmplitude f = f0 * cplx(1.0 / std::sqrt(norm2(f0)));
    g0 = g0 * cplx(1.0 / std::sqrt(norm2(g0)));
    const cplx raw = inner_product(f, g0);
    const JointAmplitude g = g0 * (std::conj(raw) / std::abs(raw));
    const double kk = ref::integrate_c(f.grid(), [&](std::size_t i, std::size_t j) {
                        return std::conj(f(i, j)) * g(i, j);
                      }).real();

    double last = -1.0;
    for (double phi : {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, kPi}) {  // cos phi decreasing
      const double p = coincidence_probability(TwoPhotonState(f, g * std::exp(-kI * phi)));
      EXPECT_NEAR(p, 0.5 * (1.0 - kk * std::cos(phi)), 1e-12);
      EXPECT_GE(p, last);
      last = p;
    }
    const double dip = coincidence_probability(TwoPhotonState(f, g));
    const double peak = coincidence_probability(TwoPhotonState(f, g * cplx(-1.0)));
    EXPECT_NEAR(0.5 - dip, peak - 0.5, 1e-12);
  }
}

TEST(Coincidence, CommonEmissionShiftLeavesCurveUnchanged) {
  gen::Rng rng(gen::kSeed + 26);
  for (int k = 0; k < 10; ++k) {
    SpdcParams p = gen::spdc_params(rng);
    const FrequencyGrid g = default_grid(p, 96);
    const TwoPhotonState a = build_type2_ultrafast(p, g);
    const double shift = gen::uniform(rng, -500e-15, 500e-15);
    p.t_h += shift;
    p.t_v += shift;
    const TwoPhotonState b = build_type2_ultrafast(p, g);
    for (double tau : linspace(-1e-12, 1e-12, 41))
      EXPECT_NEAR(coincidence_probability(a, tau), coincidence_probability(b, tau), 1e-9);
  }
}

TEST(Coincidence, PathOneDelayTranslatesCurve) {
  gen::Rng rng(gen::kSeed + 27);
  for (int k = 0; k < 10; ++k) {
    const TwoPhotonState s = gen::any_state(rng);
    const double d = gen::uniform(rng, -300e-15, 300e-15);
    const TwoPhotonState moved = delay_path(s, 1, d);
    for (double tau : linspace(-6e-13, 6e-13, 25))
      EXPECT_NEAR(coincidence_probability(moved, tau), coincidence_probability(s, tau + d), 1e-12);
    // A path-2 delay is the same as advancing path 1.
    const TwoPhotonState other = delay_path(s, 2, d);
    for (double tau : linspace(-6e-13, 6e-13, 25))
      EXPECT_NEAR(coincidence_probability(other, tau), coincidence_probability(s, tau - d), 1e-12);
  }
  EXPECT_THROW(delay_path(gen::any_state(rng, 16), 3, 1e-15), InvalidInput);
}

TEST(CoherenceTime, InverseOfNarrowestMarginal) {
  const FrequencyGrid g = FrequencyGrid::centered(kW0, 1.2e14, 256);
  const JointAmplitude f = JointAmplitude::sample(g, [&](double wh, double wv) {
    return gaussian_amplitude(wh, kW0, 2e13) * gaussian_amplitude(wv, kW0, 0.8e13);
  });
  EXPECT_NEAR(coherence_time(build_antisymmetric(f)), 1.0 / 0.8e13, 1e-6 / 0.8e13);
}

TEST(DelayScan, PhasePiGivesIdealPeak) {
  const TwoPhotonState s = preset(kPi);
  const DelayScanCurve c = delay_scan(s, scan_axis(s));
  EXPECT_TRUE(c.is_peak());
  EXPECT_NEAR(c.background, 0.5, 1e-6);
  EXPECT_NEAR(c.visibility, 1.0, 0.01);
  EXPECT_NEAR(c.extremum_delay, 0.0, 1e-16);
  for (const ScanSample& x : c.samples) {
    EXPECT_GE(x.rate, -1e-12);
    EXPECT_LE(x.rate, 2 * c.background + 1e-6);
  }
}

TEST(DelayScan, PhaseZeroWithArmDelayGivesShiftedDip) {
  const double arm2 = 100e-15;
  const TwoPhotonState s = preset(0.0, arm2);
  const DelayScanCurve c = delay_scan(s, scan_axis(s));
  EXPECT_TRUE(c.is_dip());
  EXPECT_NEAR(c.visibility, 1.0, 0.01);
  EXPECT_NEAR(c.extremum_delay, arm2, 1e-17);
}

TEST(DelayScan, ModeOverlapGivesReducedVisibility) {
  const TwoPhotonState s = preset(kPi);
  const DelayScanCurve c = delay_scan(s, scan_axis(s), 0.91);
  EXPECT_NEAR(c.visibility, 0.91, 0.005);
}

TEST(DelayScan, FeatureWidthOfGaussianPair) {
  // |P - 1/2| = exp(-sigma^2 tau^2) / 2 falls to half height at tau = sqrt(ln 2) / sigma.
  const TwoPhotonState s = build_antisymmetric(identical_pair(grid(256)));
  const DelayScanCurve c = delay_scan(s, linspace(-20 / kSigma, 20 / kSigma, 2001));
  EXPECT_NEAR(c.feature_fwhm, 2.0 * std::sqrt(std::log(2.0)) / kSigma, 1e-3 / kSigma);
}

TEST(DelayScan, FlatCurveHasNoFeature) {
  const double red = angular_frequency(790.0 * kNanometer), blue = angular_frequency(770.0 * kNanometer);
  const TwoPhotonState s =
      build_two_color(TwoColorCase::kColorWithPath, red, blue, 5e12, two_color_grid(red, blue, 5e12));
  const DelayScanCurve c = delay_scan(s, scan_axis(s));
  EXPECT_FALSE(c.has_feature());
  EXPECT_FALSE(c.is_peak());
  EXPECT_FALSE(c.is_dip());
  EXPECT_EQ(c.feature_fwhm, 0.0);
}

TEST(DelayScan, RejectsBadAxes) {
  const TwoPhotonState s = preset(kPi);
  const double tc = coherence_time(s);
  EXPECT_THROW(delay_scan(s, linspace(-5 * tc, 5 * tc, 200)), InvalidInput);
  EXPECT_THROW(delay_scan(s, linspace(-20 * tc, 20 * tc, 10)), InvalidInput);
  std::vector<double> unsorted = linspace(-20 * tc, 20 * tc, 50);
  std::swap(unsorted[3], unsorted[4]);
  EXPECT_THROW(delay_scan(s, unsorted), InvalidInput);
}

TEST(Feynman, IdenticalArmsArePairwiseIndistinguishable) {
  const FeynmanDecomposition d = feynman_decomposition(preset(kPi));
  EXPECT_NEAR(d.overlap_14, 1.0, 1e-12);
  EXPECT_NEAR(d.overlap_23, 1.0, 1e-12);
}

TEST(Feynman, TwoColorCaseTwoIsDistinguishable) {
  const double red = angular_frequency(790.0 * kNanometer), blue = angular_frequency(770.0 * kNanometer);
  const TwoPhotonState s =
      build_two_color(TwoColorCase::kColorWithPath, red, blue, 5e12, two_color_grid(red, blue, 5e12));
  const FeynmanDecomposition d = feynman_decomposition(s);
  EXPECT_LT(d.overlap_14, 1e-6);
  EXPECT_LT(d.overlap_23, 1e-6);
}

TEST(Feynman, PairsRecombineToCoincidenceAmplitudes) {
  gen::Rng rng(gen::kSeed + 28);
  for (int k = 0; k < 20; ++k) {
    const TwoPhotonState s = gen::any_state(rng, 48);
    const double tau = gen::uniform(rng, -3e-13, 3e-13);
    const FeynmanDecomposition d = feynman_decomposition(s, tau);
    const BsOutputState out = bs_transform(s, tau);
    EXPECT_LT(peak_abs((d.psi1 + d.psi4) - out.a43), 1e-15);
    EXPECT_LT(peak_abs((d.psi2 + d.psi3) - out.a34), 1e-15);
  }
}
