#pragma once

#include <cmath>

#include "phonoscope/core/constants.hpp"
#include "phonoscope/emission/geometry.hpp"
#include "phonoscope/emission/medium.hpp"

namespace phonoscope::emission {

enum class ShearPolarization { X, Y };

namespace detail {

inline double free_space_rate(double e, double v, const AcousticMedium& m, const DeviceGeometry& geom,
                              double omega0, double field2) {
  if (!(omega0 > 0.0)) throw ValidationError("free-space rate: omega0 must be positive");
  if (!(field2 >= 0.0)) throw ValidationError("free-space rate: squared-field integral must be non-negative");
  m.validate();
  geom.validate();
  const double s = std::sin(omega0 * geom.b_p / (2.0 * v));
  return (constants::two_pi / constants::hbar) * (4.0 * e * e / (constants::pi * v * m.rho * omega0)) *
         s * s * s * s * field2;
}

}  // namespace detail

/** Suppression factor sin^4(omega0 b_p / 2v) for velocity v. */
inline double film_suppression(double omega0, double b_p, double v) {
  const double s = std::sin(omega0 * b_p / (2.0 * v));
  return s * s * s * s;
}

/** Emission rate into longitudinal free-space waves (rad/s). */
inline double free_space_rate_longitudinal(const AcousticMedium& m, const DeviceGeometry& geom, double omega0,
                                           double ez2_integral) {
  return detail::free_space_rate(m.e33, m.v_l, m, geom, omega0, ez2_integral);
}

/** Emission rate into one shear polarization, driven by E_x or E_y (rad/s). */
inline double free_space_rate_shear(const AcousticMedium& m, const DeviceGeometry& geom, double omega0,
                                    double ealpha2_integral, ShearPolarization /*polarization*/) {
  return detail::free_space_rate(m.e15, m.v_sh, m, geom, omega0, ealpha2_integral);
}

struct EmissionRates {
  double longitudinal = 0.0;
  double shear_x = 0.0;
  double shear_y = 0.0;
  double total() const { return longitudinal + shear_x + shear_y; }
};

inline EmissionRates total_free_space_rate(const AcousticMedium& m, const DeviceGeometry& geom, double omega0,
                                           double ex2, double ey2, double ez2) {
  EmissionRates r;
  r.longitudinal = free_space_rate_longitudinal(m, geom, omega0, ez2);
  r.shear_x = free_space_rate_shear(m, geom, omega0, ex2, ShearPolarization::X);
  r.shear_y = free_space_rate_shear(m, geom, omega0, ey2, ShearPolarization::Y);
  return r;
}

/** Dimensionless participation ratio eps0 eps b_p int E_z^2 / (hbar omega0). */
inline double participation_ratio(double eps_relative, double b_p, double ez2_integral, double omega0) {
  if (!(omega0 > 0.0) || !(b_p > 0.0) || !(eps_relative > 0.0)) {
    throw ValidationError("participation_ratio: omega0, b_p and eps must be positive");
  }
  return constants::epsilon0 * eps_relative * b_p * ez2_integral / (constants::hbar * omega0);
}

}  // namespace phonoscope::emission
