#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "phonoscope/special/bessel.hpp"

using phonoscope::DomainError;
using phonoscope::special::BesselKind;
using phonoscope::special::bessel_kernel;

namespace {

double j1_prime(double x) { return bessel_kernel(x, BesselKind::J0) - bessel_kernel(x, BesselKind::J1) / x; }
double y1_prime(double x) { return bessel_kernel(x, BesselKind::Y0) - bessel_kernel(x, BesselKind::Y1) / x; }

}  // namespace

TEST(BesselKernel, ValuesAtZero) {
  EXPECT_EQ(bessel_kernel(0.0, BesselKind::J1), 0.0);
  EXPECT_EQ(bessel_kernel(0.0, BesselKind::I1), 0.0);
  EXPECT_EQ(bessel_kernel(0.0, BesselKind::J0), 1.0);
}

TEST(BesselKernel, SingularKindsRejectZero) {
  EXPECT_THROW(bessel_kernel(0.0, BesselKind::Y1), DomainError);
  EXPECT_THROW(bessel_kernel(0.0, BesselKind::K1), DomainError);
  EXPECT_THROW(bessel_kernel(-1.0, BesselKind::J1), DomainError);
  EXPECT_THROW(bessel_kernel(std::nan(""), BesselKind::I1), DomainError);
}

TEST(BesselKernel, FirstRootOfJ1ByNewton) {
  double x = 3.8;
  for (int it = 0; it < 50; ++it) x -= bessel_kernel(x, BesselKind::J1) / j1_prime(x);
  EXPECT_NEAR(x, 3.83171, 1e-5);
}

TEST(BesselKernel, WronskianOfJ1Y1) {
  for (double x : {0.5, 2.0, 10.0}) {
    const double w = bessel_kernel(x, BesselKind::J1) * y1_prime(x) - j1_prime(x) * bessel_kernel(x, BesselKind::Y1);
    EXPECT_NEAR(w, 2.0 / (oracle::pi * x), 1e-8) << "x = " << x;
  }
}

TEST(BesselKernel, MatchesIntegralRepresentationsOnZeroToFifty) {
  for (double x = 0.05; x <= 50.0; x += 0.35) {
    EXPECT_NEAR(bessel_kernel(x, BesselKind::J0), oracle::bessel_j(0, x), 1e-10) << x;
    EXPECT_NEAR(bessel_kernel(x, BesselKind::J1), oracle::bessel_j(1, x), 1e-10) << x;
    EXPECT_NEAR(bessel_kernel(x, BesselKind::Y1), oracle::bessel_y(1, x), 1e-10) << x;
    EXPECT_NEAR(bessel_kernel(x, BesselKind::K1), oracle::bessel_k(1, x), 1e-10) << x;
    // I1 grows like e^x, so absolute 1e-10 only makes sense relative to its size.
    const double i1 = oracle::bessel_i(1, x);
    EXPECT_NEAR(bessel_kernel(x, BesselKind::I1), i1, 1e-10 * std::max(1.0, i1)) << x;
  }
}

TEST(BesselKernel, ScaledModifiedFunctionsJoinAtAsymptoticSwitch) {
  using phonoscope::special::bessel_i_scaled;
  using phonoscope::special::bessel_k_scaled;
  // f(x - d) f(x + d) / f(x)^2 is 1 + O(d^2) for a smooth f; a jump at x shows up at first order.
  const double x0 = 500.0, d = 1e-6;
  for (int nu : {0, 1}) {
    const double i_sym = bessel_i_scaled(nu, x0 - d) * bessel_i_scaled(nu, x0 + d) / std::pow(bessel_i_scaled(nu, x0), 2);
    const double k_sym = bessel_k_scaled(nu, x0 - d) * bessel_k_scaled(nu, x0 + d) / std::pow(bessel_k_scaled(nu, x0), 2);
    EXPECT_NEAR(i_sym, 1.0, 1e-12);
    EXPECT_NEAR(k_sym, 1.0, 1e-12);
  }
  // At 600 the unscaled values still fit in a double, so the oracle can check the product.
  const double x = 600.0;
  EXPECT_NEAR(phonoscope::special::product_ik(1, 1, x) / (oracle::bessel_i(1, x) * oracle::bessel_k(1, x)), 1.0, 1e-11);
  EXPECT_NEAR(phonoscope::special::product_ik(1, 0, x) / (oracle::bessel_i(1, x) * oracle::bessel_k(0, x)), 1.0, 1e-11);
}

TEST(BesselKernel, IntegerOrderJ) {
  for (int m = 0; m <= 5; ++m)
    for (double x : {0.0, 0.7, 3.1, 12.0, 33.3}) EXPECT_NEAR(phonoscope::special::bessel_j(m, x), oracle::bessel_j(m, x), 1e-12);
  EXPECT_THROW(phonoscope::special::bessel_j(-1, 1.0), DomainError);
}

TEST(ThresholdFactors, SmallArgumentSeriesMatchDirectForms) {
  using phonoscope::special::above_threshold_factor_over_x2;
  using phonoscope::special::below_threshold_factor_over_x2;
  for (double x : {0.02, 0.3, 0.9, 1.0}) {
    const double ik = oracle::bessel_i(1, x) * oracle::bessel_k(1, x);
    EXPECT_NEAR(below_threshold_factor_over_x2(x), (1.0 - 2.0 * ik) / (x * x), 1e-9) << x;
  }
  for (double x : {0.02, 0.5, 1.5, 2.0}) {
    const double jy = oracle::bessel_j(1, x) * oracle::bessel_y(1, x);
    EXPECT_NEAR(above_threshold_factor_over_x2(x), (1.0 + oracle::pi * jy) / (x * x), 1e-9) << x;
  }
  // Both branches are continuous where the evaluation switches method.
  EXPECT_NEAR(below_threshold_factor_over_x2(1.0), below_threshold_factor_over_x2(1.0 + 1e-12), 1e-10);
  EXPECT_NEAR(above_threshold_factor_over_x2(2.0), above_threshold_factor_over_x2(2.0 + 1e-12), 1e-10);
  EXPECT_THROW(below_threshold_factor_over_x2(0.0), DomainError);
}
