#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "phonoscope/boundstates/bessel_roots.hpp"
#include "phonoscope/boundstates/spectra.hpp"
#include "phonoscope/emission/coupling.hpp"

using namespace phonoscope;
using namespace phonoscope::boundstates;
using phonoscope::emission::AcousticMedium;
using phonoscope::emission::Cylinder;
using phonoscope::emission::DeviceGeometry;
using phonoscope::emission::Dome;

namespace {

constexpr double kTwoPi = 2.0 * oracle::pi;

AcousticMedium sapphire_medium() {
  AcousticMedium m;
  m.rho = 3980.0;
  m.v_l = 11.2e3;
  m.v_sh = 6.1e3;
  m.v_perp = 9.2e3;
  m.e33 = 1.40;
  m.e15 = 0.40;
  return m;
}

DeviceGeometry with(emission::Transducer t) {
  DeviceGeometry g;
  g.b = 100e-6;
  g.b_p = 1e-6;
  g.a = 300e-6;
  g.transducer = t;
  return g;
}

// Dome with R = 7.8 mm and z0 = 1 um.
Dome reference_dome(double z0 = 1e-6) { return Dome{z0, std::sqrt(2.0 * 1e-6 * 7.8e-3)}; }

int overtone_near_5ghz(const AcousticMedium& m, const DeviceGeometry& g) {
  return emission::nearest_overtone(m, g, kTwoPi * 5e9);
}

/** Oracle root of J_m by Newton iteration on the integral-representation Bessel function. */
double oracle_root(int m, double guess) {
  double x = guess;
  for (int it = 0; it < 50; ++it) {
    const double f = oracle::bessel_j(m, x);
    const double d = m == 0 ? -oracle::bessel_j(1, x) : 0.5 * (oracle::bessel_j(m - 1, x) - oracle::bessel_j(m + 1, x));
    const double nx = x - f / d;
    if (std::abs(nx - x) < 1e-14 * x) return nx;
    x = nx;
  }
  return x;
}

}  // namespace

// ---------------------------------------------------------------- Bessel roots

TEST(BesselRoots, FirstRootsMatchTabulatedValues) {
  EXPECT_NEAR(bessel_root(0, 1), 2.40483, 1e-5);
  EXPECT_NEAR(bessel_root(1, 1), 3.83171, 1e-5);
}

TEST(BesselRoots, AgreeWithNewtonOnOracle) {
  for (int m : {0, 1, 2, 5}) {
    for (int l = 1; l <= 12; ++l) {
      const double mu = bessel_root(m, l);
      EXPECT_NEAR(mu, oracle_root(m, mu + 1e-3), 1e-9) << "m=" << m << " l=" << l;
    }
  }
}

TEST(BesselRoots, McMahonAsymptoticAtLargeIndex) {
  EXPECT_LT(std::abs(bessel_root(0, 20) - (20.0 - 0.25) * oracle::pi), 0.01);
}

TEST(BesselRoots, StrictlyIncreasingAndInterlaced) {
  for (int m = 0; m <= 3; ++m) {
    for (int l = 1; l < 25; ++l) {
      EXPECT_LT(bessel_root(m, l), bessel_root(m, l + 1));
      // roots of J_m and J_{m+1} interlace
      EXPECT_LT(bessel_root(m, l), bessel_root(m + 1, l));
      EXPECT_LT(bessel_root(m + 1, l), bessel_root(m, l + 1));
    }
  }
}

TEST(BesselRoots, TableGrowsConsistently) {
  const double early = bessel_root(3, 2);
  const double late = bessel_root(3, 90);  // forces the row to be rebuilt
  EXPECT_GT(late, early);
  EXPECT_EQ(bessel_root(3, 2), early);
}

TEST(BesselRoots, RejectsBadIndices) {
  EXPECT_THROW(bessel_root(-1, 1), DomainError);
  EXPECT_THROW(bessel_root(0, 0), DomainError);
}

// ---------------------------------------------------------------- dome

TEST(DomeSpectrum, EvenModeSpacingMatchesClosedForm) {
  const auto med = sapphire_medium();
  const auto geom = with(reference_dome());
  const int n = overtone_near_5ghz(med, geom);
  const auto s = dome_spectrum(med, geom, n, 10);
  const double even_spacing = s.modes[2].omega - s.modes[0].omega;
  EXPECT_NEAR(even_spacing / kTwoPi, 3.3e6, 0.05 * 3.3e6);
  EXPECT_NEAR(even_spacing, 2.0 * med.v_perp / std::sqrt(7.8e-3 * geom.b), 1e-9 * even_spacing);
}

TEST(DomeSpectrum, LadderIsEquidistant) {
  const auto med = sapphire_medium();
  const auto geom = with(reference_dome());
  const auto s = dome_spectrum(med, geom, 89, 40);
  const double step = s.modes[1].omega - s.modes[0].omega;
  for (std::size_t i = 1; i < s.modes.size(); ++i) {
    const double d = s.modes[i].omega - s.modes[i - 1].omega;
    EXPECT_NEAR(d, step, 1e-12 * s.modes[i].omega);
  }
}

TEST(DomeSpectrum, FlatDomeHasNoBoundModes) {
  const auto med = sapphire_medium();
  const auto geom = with(Dome{0.0, 125e-6});
  const auto s = dome_spectrum(med, geom, 89, 20);
  for (const auto& mode : s.modes) EXPECT_FALSE(mode.below_threshold);
  EXPECT_EQ(resolvable_count(s, geom.transducer), 0);
}

TEST(DomeSpectrum, ResolvableEvenModeCount) {
  const auto med = sapphire_medium();
  const auto geom = with(reference_dome());
  const int n = overtone_near_5ghz(med, geom);
  const double lambda = acoustic_wavelength(med, emission::overtone_frequency(med, geom, n));
  EXPECT_NEAR(lambda, 2.2e-6, 0.1e-6);
  const auto s = dome_spectrum(med, geom, n, 60);
  EXPECT_NEAR(resolvable_count(s, geom.transducer), 15, 1);
}

TEST(DomeSpectrum, CountAgreesWithClosedFormBound) {
  const auto med = sapphire_medium();
  for (double z0 : {0.5e-6, 1e-6, 2e-6}) {
    const auto geom = with(reference_dome(z0));
    for (int n : {45, 89, 130}) {
      const auto s = dome_spectrum(med, geom, n, 200);
      int below = 0;
      for (const auto& mode : s.modes) below += mode.below_threshold ? 1 : 0;
      const double lambda = acoustic_wavelength(med, emission::overtone_frequency(med, geom, n));
      EXPECT_NEAR(below, dome_bound(med, geom, lambda), 1.0) << "z0=" << z0 << " n=" << n;
    }
  }
}

TEST(DomeSpectrum, BoundFrequenciesLieInsideThresholdWindow) {
  const auto med = sapphire_medium();
  const auto geom = with(reference_dome());
  const double omega_n = emission::overtone_frequency(med, geom, 89);
  for (auto form : {DomeForm::kParaxial, DomeForm::kExact}) {
    const auto s = dome_spectrum(med, geom, 89, 60, form);
    for (const auto& mode : s.modes) {
      if (!mode.below_threshold) continue;
      EXPECT_GE(mode.omega, omega_n * std::sqrt(1.0 - 2.0 * 1e-6 / geom.b));
      EXPECT_LE(mode.omega, omega_n);
    }
  }
}

TEST(DomeSpectrum, ExactAndParaxialFormsAgreeToSecondOrder) {
  const auto med = sapphire_medium();
  const auto geom = with(reference_dome());
  const auto p = dome_spectrum(med, geom, 89, 20, DomeForm::kParaxial);
  const auto e = dome_spectrum(med, geom, 89, 20, DomeForm::kExact);
  const double omega_n = emission::overtone_frequency(med, geom, 89);
  for (std::size_t i = 0; i < p.modes.size(); ++i) {
    const double shift = (omega_n - p.modes[i].omega) / omega_n;
    EXPECT_LT(std::abs(p.modes[i].omega - e.modes[i].omega) / omega_n, 2.0 * (shift * shift + 1e-4 * 1e-4));
  }
}

TEST(DomeSpectrum, RejectsBadInput) {
  const auto med = sapphire_medium();
  EXPECT_THROW(dome_spectrum(med, with(Cylinder{1e-6, 125e-6}), 89, 5), ValidationError);
  EXPECT_THROW(dome_spectrum(med, with(reference_dome()), 89, -1), ValidationError);
  EXPECT_THROW(dome_spectrum(med, with(Dome{1e-6, 0.0}), 89, 5), ValidationError);
  EXPECT_THROW(dome_spectrum(med, with(Dome{200e-6, 125e-6}), 89, 5), ValidationError);
  EXPECT_THROW(dome_spectrum(med, with(reference_dome()), 0, 5), ValidationError);
  EXPECT_THROW(dome_bound(med, with(Cylinder{1e-6, 125e-6}), 2.2e-6), ValidationError);
}

// ---------------------------------------------------------------- cylinder

TEST(CylinderSpectrum, BoundCountNearFiveGigahertz) {
  const auto med = sapphire_medium();
  const auto geom = with(Cylinder{1e-6, 125e-6});
  const int n = overtone_near_5ghz(med, geom);
  const auto s = cylinder_spectrum(med, geom, n, {0}, 60);
  EXPECT_NEAR(resolvable_count(s, geom.transducer), 19, 1);
}

TEST(CylinderSpectrum, TwoCountingRoutesAgree) {
  const auto med = sapphire_medium();
  for (double z0 : {0.3e-6, 1e-6, 3e-6}) {
    const auto geom = with(Cylinder{z0, 125e-6});
    for (int n : {30, 89, 150}) {
      for (int m : {0, 1, 4}) {
        const auto s = cylinder_spectrum(med, geom, n, {m}, 200);
        int below = 0;
        for (const auto& mode : s.modes) below += mode.below_threshold ? 1 : 0;
        EXPECT_EQ(below, cylinder_bound_count(med, geom, n, m)) << "z0=" << z0 << " n=" << n << " m=" << m;
      }
    }
  }
}

TEST(CylinderSpectrum, SpacingWidensWithRadialIndex) {
  const auto med = sapphire_medium();
  const auto geom = with(Cylinder{1e-6, 125e-6});
  const auto s = cylinder_spectrum(med, geom, 89, {0}, 20);
  const double low = s.modes[1].omega - s.modes[0].omega;
  const double high = s.modes[18].omega - s.modes[17].omega;
  EXPECT_LT(low, high);
}

TEST(CylinderSpectrum, StrictlyIncreasingInRadialIndex) {
  const auto med = sapphire_medium();
  const auto geom = with(Cylinder{1e-6, 125e-6});
  const auto s = cylinder_spectrum(med, geom, 89, {0, 1, 2, 3}, 40);
  for (std::size_t i = 1; i < s.modes.size(); ++i) {
    if (s.modes[i].m != s.modes[i - 1].m) continue;
    EXPECT_GT(s.modes[i].omega, s.modes[i - 1].omega);
  }
}

TEST(CylinderSpectrum, FrequenciesMatchIndependentFormula) {
  const auto med = sapphire_medium();
  const auto geom = with(Cylinder{1e-6, 125e-6});
  const double omega_n = oracle::pi * 89 * med.v_l / geom.b;
  const auto s = cylinder_spectrum(med, geom, 89, {0, 2}, 10);
  for (const auto& mode : s.modes) {
    const double mu = oracle_root(mode.m, bessel_root(mode.m, mode.l));
    const double kperp = mu / 125e-6;
    const double expected = omega_n * (1.0 - 1e-6 / geom.b) + med.v_perp * med.v_perp * kperp * kperp / (2.0 * omega_n);
    EXPECT_NEAR(mode.omega, expected, 1e-12 * expected);
  }
}

TEST(CylinderSpectrum, BoundFrequenciesLieInsideThresholdWindow) {
  const auto med = sapphire_medium();
  const auto geom = with(Cylinder{1e-6, 125e-6});
  const double omega_n = emission::overtone_frequency(med, geom, 89);
  const auto s = cylinder_spectrum(med, geom, 89, {0, 1, 2}, 60);
  for (const auto& mode : s.modes) {
    if (!mode.below_threshold) continue;
    EXPECT_GE(mode.omega, omega_n * std::sqrt(1.0 - 2.0 * 1e-6 / geom.b));
    EXPECT_LE(mode.omega, omega_n);
  }
}

TEST(CylinderSpectrum, WarnsOutsideValidityRange) {
  const auto med = sapphire_medium();
  const auto narrow = cylinder_spectrum(med, with(Cylinder{1e-6, 20e-6}), 89, {0}, 3);
  EXPECT_FALSE(narrow.warnings.empty());
  const auto wide = cylinder_spectrum(med, with(Cylinder{5e-6, 125e-6}), 89, {0}, 3);
  EXPECT_TRUE(wide.warnings.empty());
}

TEST(CylinderSpectrum, RejectsBadInput) {
  const auto med = sapphire_medium();
  EXPECT_THROW(cylinder_spectrum(med, with(reference_dome()), 89, {0}, 5), ValidationError);
  EXPECT_THROW(cylinder_spectrum(med, with(Cylinder{1e-6, 125e-6}), 89, {0}, 0), ValidationError);
  EXPECT_THROW(cylinder_spectrum(med, with(Cylinder{1e-6, 125e-6}), 89, {-1}, 5), ValidationError);
  EXPECT_THROW(cylinder_mu2_bound(med, with(reference_dome()), 2.2e-6), ValidationError);
}

// ---------------------------------------------------------------- coupling selection and sticks

TEST(Coupling, SelectionRules) {
  BoundMode even{89, 2, 0, 1.0, true};
  BoundMode odd{89, 1, 0, 1.0, true};
  EXPECT_TRUE(couples_to_qubit(even, reference_dome()));
  EXPECT_FALSE(couples_to_qubit(odd, reference_dome()));
  BoundMode m0{89, 0, 3, 1.0, true};
  EXPECT_TRUE(couples_to_qubit(m0, Cylinder{1e-6, 125e-6}));
  EXPECT_FALSE(couples_to_qubit(even, Cylinder{1e-6, 125e-6}));
  EXPECT_FALSE(couples_to_qubit(m0, emission::Flat{}));
}

TEST(Sticks, OneFreeSpectralRangeHoldsOneCylinderLadder) {
  const auto med = sapphire_medium();
  const auto geom = with(Cylinder{1e-6, 125e-6});
  const int n = overtone_near_5ghz(med, geom);
  const double hi = emission::overtone_frequency(med, geom, n);
  const double lo = emission::overtone_frequency(med, geom, n - 1);
  const auto modes = modes_in_range(med, geom, lo, hi);
  const auto sticks = stick_spectrum(modes, geom.transducer, lo, hi);
  EXPECT_EQ(sticks.size(), 19u);
  for (std::size_t i = 1; i < sticks.size(); ++i) EXPECT_LE(sticks[i - 1], sticks[i]);
}

TEST(Sticks, EmptyModeListGivesNoSticks) {
  EXPECT_TRUE(stick_spectrum({}, Cylinder{1e-6, 125e-6}, 1.0, 2.0).empty());
}

TEST(Sticks, OffsetShiftsRigidly) {
  const auto med = sapphire_medium();
  const auto geom = with(reference_dome());
  const auto modes = dome_spectrum(med, geom, 89, 60).modes;
  const double lo = 0.0, hi = 1e12;
  const double offset = kTwoPi * 1.25e6;
  const auto base = stick_spectrum(modes, geom.transducer, lo, hi);
  const auto shifted = stick_spectrum(modes, geom.transducer, lo, hi, offset);
  ASSERT_EQ(base.size(), shifted.size());
  ASSERT_FALSE(base.empty());
  for (std::size_t i = 0; i < base.size(); ++i) EXPECT_EQ(shifted[i], base[i] + offset);
}

TEST(Sticks, EmptyWindowRejected) {
  EXPECT_THROW(stick_spectrum({}, reference_dome(), 2.0, 2.0), ValidationError);
  EXPECT_THROW(modes_in_range(sapphire_medium(), with(reference_dome()), 2.0, 1.0), ValidationError);
}
