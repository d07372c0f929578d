#pragma once

#include <cmath>

#include "phonoscope/elastodynamics/christoffel.hpp"
#include "phonoscope/elastodynamics/rotation.hpp"

namespace phonoscope::elastodynamics {

inline void check_tilt(double omega0, double tilt) {
  if (!(omega0 > 0.0)) throw ValidationError("shear splitting: omega0 must be positive");
  if (!(tilt >= 0.0 && tilt < 0.1)) throw ValidationError("shear splitting: tilt must lie in [0, 0.1) rad");
}

/**
 * First-order splitting of the two shear standing-wave ladders when the
 * c-axis is tilted by `tilt` (rad): omega0 * tilt * 2|c14| / c44. Independent of phi.
 */
inline double shear_splitting(const materials::MaterialTensorSet& mat, double omega0, double tilt, double /*phi*/ = 0.0) {
  check_tilt(omega0, tilt);
  const double c44 = mat.c(3, 3);
  if (!(c44 > 0.0)) throw ValidationError("shear splitting: c44 must be positive");
  return omega0 * tilt * 2.0 * std::abs(mat.c(0, 3)) / c44;
}

/** Same splitting from the full Christoffel problem of the rotated crystal along z. */
inline double shear_splitting_numerical(const materials::MaterialTensorSet& mat, double omega0, double tilt, double phi = 0.0) {
  check_tilt(omega0, tilt);
  const materials::Stiffness c = rotate_stiffness(materials::effective_stiffness(mat), tilt_rotation(tilt, phi));
  const PolarizedVelocities v = solve_christoffel(christoffel_matrix(c, mat.rho, {0.0, 0.0, 1.0}));
  const double mean = 0.5 * (v.velocity[1] + v.velocity[2]);
  return omega0 * (v.velocity[1] - v.velocity[2]) / mean;
}

}  // namespace phonoscope::elastodynamics
