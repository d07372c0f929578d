#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "phonoscope/core/constants.hpp"
#include "phonoscope/core/error.hpp"

namespace phonoscope::special {

enum class BesselKind { J0, J1, Y0, Y1, I0, I1, K0, K1 };

namespace detail {

// Beyond this argument the unscaled modified functions leave double range.
inline constexpr double modified_asymptotic_start = 500.0;

// Large-argument series shared by I_nu e^{-x} and K_nu e^{x}:
// a_k(nu) = prod_{j<=k} (4 nu^2 - (2j-1)^2) / (k! 8^k).
inline double modified_series(int nu, double x, double sign) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 30; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= sign * (mu - odd * odd) / (k * 8.0 * x);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

inline double digamma_int(int n) {
  // psi(n) for positive integer n
  double s = -constants::euler_gamma;
  for (int k = 1; k < n; ++k) s += 1.0 / k;
  return s;
}

}  // namespace detail

inline void check_order_and_argument(int nu, double x, bool positive_only, const char* name) {
  if (nu != 0 && nu != 1) throw DomainError(std::string(name) + ": order must be 0 or 1");
  if (std::isnan(x)) throw DomainError(std::string(name) + ": argument is NaN");
  if (positive_only ? !(x > 0.0) : (x < 0.0)) {
    throw DomainError(std::string(name) + ": argument out of domain");
  }
}

/** I_nu(x) e^{-x} for nu in {0, 1}, x >= 0. */
inline double bessel_i_scaled(int nu, double x) {
  check_order_and_argument(nu, x, false, "bessel_i_scaled");
  if (x < detail::modified_asymptotic_start) {
    return std::cyl_bessel_i(static_cast<double>(nu), x) * std::exp(-x);
  }
  return detail::modified_series(nu, x, -1.0) / std::sqrt(constants::two_pi * x);
}

/** K_nu(x) e^{x} for nu in {0, 1}, x > 0. */
inline double bessel_k_scaled(int nu, double x) {
  check_order_and_argument(nu, x, true, "bessel_k_scaled");
  if (x < detail::modified_asymptotic_start) {
    return std::cyl_bessel_k(static_cast<double>(nu), x) * std::exp(x);
  }
  return detail::modified_series(nu, x, 1.0) * std::sqrt(constants::pi / (2.0 * x));
}

/**
 * Bessel functions of order 0 and 1. Y and K require x > 0, I and J accept
 * x >= 0; anything else (NaN included) raises DomainError.
 */
inline double bessel_kernel(double x, BesselKind kind) {
  switch (kind) {
    case BesselKind::J0:
      check_order_and_argument(0, x, false, "J0");
      return std::cyl_bessel_j(0.0, x);
    case BesselKind::J1:
      check_order_and_argument(1, x, false, "J1");
      return std::cyl_bessel_j(1.0, x);
    case BesselKind::Y0:
      check_order_and_argument(0, x, true, "Y0");
      return std::cyl_neumann(0.0, x);
    case BesselKind::Y1:
      check_order_and_argument(1, x, true, "Y1");
      return std::cyl_neumann(1.0, x);
    case BesselKind::I0:
      check_order_and_argument(0, x, false, "I0");
      return x < detail::modified_asymptotic_start ? std::cyl_bessel_i(0.0, x)
                                                   : std::numeric_limits<double>::infinity();
    case BesselKind::I1:
      check_order_and_argument(1, x, false, "I1");
      return x < detail::modified_asymptotic_start ? std::cyl_bessel_i(1.0, x)
                                                   : std::numeric_limits<double>::infinity();
    case BesselKind::K0:
      check_order_and_argument(0, x, true, "K0");
      return x < detail::modified_asymptotic_start ? std::cyl_bessel_k(0.0, x)
                                                   : bessel_k_scaled(0, x) * std::exp(-x);
    case BesselKind::K1:
      check_order_and_argument(1, x, true, "K1");
      return x < detail::modified_asymptotic_start ? std::cyl_bessel_k(1.0, x)
                                                   : bessel_k_scaled(1, x) * std::exp(-x);
  }
  throw DomainError("unknown Bessel kind");
}

/** J_m(x) of integer order m >= 0. */
inline double bessel_j(int m, double x) {
  if (m < 0) throw DomainError("bessel_j: negative order");
  if (std::isnan(x) || x < 0.0) throw DomainError("bessel_j: argument out of domain");
  return std::cyl_bessel_j(static_cast<double>(m), x);
}

/** I_nu(x) K_mu(x) for nu, mu in {0, 1}, stable for all x > 0. */
inline double product_ik(int nu, int mu, double x) {
  return bessel_i_scaled(nu, x) * bessel_k_scaled(mu, x);
}

/**
 * (1 - 2 I1(x) K1(x)) / x^2, the sub-threshold factor of the self-energy.
 * A series is used for small x where the difference cancels.
 */
inline double below_threshold_factor_over_x2(double x) {
  if (!(x > 0.0)) throw DomainError("below_threshold_factor: x must be positive");
  if (x > 1.0) return (1.0 - 2.0 * product_ik(1, 1, x)) / (x * x);
  // 1 - 2 I1 K1 = -sum_{k>=1} q^k/(k!(k+1)!) - 2 ln(x/2) I1^2 + (x/2) I1 S_K,  q = x^2/4
  const double q = 0.25 * x * x;
  double i1_over_half_x = 0.0;  // I1 / (x/2)
  double s_k = 0.0;
  double tail = 0.0;            // sum_{k>=1} q^{k-1} / (k!(k+1)!)
  double coeff = 1.0;           // q^k / (k!(k+1)!)
  for (int k = 0; k < 40; ++k) {
    if (k > 0) coeff *= q / (static_cast<double>(k) * (k + 1));
    i1_over_half_x += coeff;
    s_k += (detail::digamma_int(k + 1) + detail::digamma_int(k + 2)) * coeff;
    if (k > 0) tail += coeff / q;
    if (coeff < 1e-18 * i1_over_half_x && k > 2) break;
  }
  // Every term divided by x^2 = 4q analytically.
  return -0.25 * tail - 0.5 * std::log(0.5 * x) * i1_over_half_x * i1_over_half_x +
         0.25 * i1_over_half_x * s_k;
}

/**
 * (1 + pi J1(x) Y1(x)) / x^2, the real part of the above-threshold factor.
 */
inline double above_threshold_factor_over_x2(double x) {
  if (!(x > 0.0)) throw DomainError("above_threshold_factor: x must be positive");
  if (x > 2.0) {
    return (1.0 + constants::pi * std::cyl_bessel_j(1.0, x) * std::cyl_neumann(1.0, x)) / (x * x);
  }
  // 1 + pi J1 Y1 = -sum_{k>=1} (-q)^k/(k!(k+1)!) + 2 ln(x/2) J1^2 - (x/2) J1 S_Y
  const double q = 0.25 * x * x;
  double j1_over_half_x = 0.0;
  double s_y = 0.0;
  double tail = 0.0;
  double coeff = 1.0;  // (-q)^k / (k!(k+1)!)
  for (int k = 0; k < 60; ++k) {
    if (k > 0) coeff *= -q / (static_cast<double>(k) * (k + 1));
    j1_over_half_x += coeff;
    s_y += (detail::digamma_int(k + 1) + detail::digamma_int(k + 2)) * coeff;
    if (k > 0) tail += coeff / q;
    if (std::abs(coeff) < 1e-18 && k > 2) break;
  }
  return -0.25 * tail + 0.5 * std::log(0.5 * x) * j1_over_half_x * j1_over_half_x -
         0.25 * j1_over_half_x * s_y;
}

}  // namespace phonoscope::special
