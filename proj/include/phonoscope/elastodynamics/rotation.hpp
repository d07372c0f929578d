#pragma once

#include <cmath>

#include "phonoscope/core/matrix.hpp"
#include "phonoscope/materials/tensors.hpp"

namespace phonoscope::elastodynamics {

inline void check_rotation(const Mat3& r) {
  const Mat3 rrt = r * r.transposed();
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (std::abs(rrt(i, j) - (i == j ? 1.0 : 0.0)) > 1e-9) throw ValidationError("rotation matrix is not orthogonal");
  if (std::abs(determinant(r) - 1.0) > 1e-9) throw ValidationError("rotation matrix must have determinant +1");
}

/** 6x6 Bond matrix K with c' = K c K^T for the rotation c'_ijkl = R_ia R_jb R_kc R_ld c_abcd. */
inline materials::Stiffness bond_matrix(const Mat3& r) {
  materials::Stiffness k{};
  const std::size_t pairs[6][2] = {{0, 0}, {1, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}};
  for (std::size_t I = 0; I < 6; ++I) {
    const std::size_t i = pairs[I][0], j = pairs[I][1];
    for (std::size_t J = 0; J < 6; ++J) {
      const std::size_t a = pairs[J][0], b = pairs[J][1];
      k(I, J) = (a == b) ? r(i, a) * r(j, a) : r(i, a) * r(j, b) + r(i, b) * r(j, a);
    }
  }
  return k;
}

/** Stiffness of the crystal rotated by R. The identity returns the input unchanged. */
inline materials::Stiffness rotate_stiffness(const materials::Stiffness& c, const Mat3& r) {
  check_rotation(r);
  if (r == Mat3::identity()) return c;
  const materials::Stiffness k = bond_matrix(r);
  return k * c * k.transposed();
}

/** Rotation by angle about a unit axis (Rodrigues). */
inline Mat3 axis_angle_rotation(const Vec3& axis, double angle) {
  const double n = norm(axis);
  if (!(n > 0.0)) throw ValidationError("rotation axis must be non-zero");
  const Vec3 u{axis[0] / n, axis[1] / n, axis[2] / n};
  const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
  Mat3 r{};
  r(0, 0) = c + u[0] * u[0] * t;
  r(0, 1) = u[0] * u[1] * t - u[2] * s;
  r(0, 2) = u[0] * u[2] * t + u[1] * s;
  r(1, 0) = u[1] * u[0] * t + u[2] * s;
  r(1, 1) = c + u[1] * u[1] * t;
  r(1, 2) = u[1] * u[2] * t - u[0] * s;
  r(2, 0) = u[2] * u[0] * t - u[1] * s;
  r(2, 1) = u[2] * u[1] * t + u[0] * s;
  r(2, 2) = c + u[2] * u[2] * t;
  return r;
}

/** Rotation that tips the z-axis by tilt toward azimuth phi. */
inline Mat3 tilt_rotation(double tilt, double phi) {
  return axis_angle_rotation({-std::sin(phi), std::cos(phi), 0.0}, tilt);
}

}  // namespace phonoscope::elastodynamics
