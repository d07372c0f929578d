#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "phonoscope/core/constants.hpp"
#include "phonoscope/core/error.hpp"
#include "phonoscope/core/matrix.hpp"

namespace phonoscope::elastodynamics {

/** Eigenpairs of a real symmetric 3x3 matrix, eigenvalues in descending order. */
struct SymmetricEigen3 {
  std::array<double, 3> values{};
  std::array<Vec3, 3> vectors{};  // orthonormal, vectors[i] belongs to values[i]
  bool used_fallback = false;     // Jacobi iteration replaced the analytic roots
};

namespace detail {

inline Vec3 normalized(const Vec3& v) {
  const double n = norm(v);
  return {v[0] / n, v[1] / n, v[2] / n};
}

// Deterministic sign: the largest-magnitude component is made positive.
inline Vec3 canonical_sign(Vec3 v) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < 3; ++i)
    if (std::abs(v[i]) > std::abs(v[k]) + 1e-12) k = i;
  if (v[k] < 0.0) v = {-v[0], -v[1], -v[2]};
  return v;
}

inline Vec3 null_vector(const Mat3& a, double lambda) {
  const Vec3 r0{a(0, 0) - lambda, a(0, 1), a(0, 2)};
  const Vec3 r1{a(1, 0), a(1, 1) - lambda, a(1, 2)};
  const Vec3 r2{a(2, 0), a(2, 1), a(2, 2) - lambda};
  const std::array<Vec3, 3> candidates{cross(r0, r1), cross(r0, r2), cross(r1, r2)};
  const Vec3* best = &candidates[0];
  for (const auto& c : candidates)
    if (norm(c) > norm(*best)) best = &c;
  return normalized(*best);
}

// Cyclic Jacobi rotations; robust for (near-)degenerate spectra.
inline SymmetricEigen3 jacobi(const Mat3& input) {
  Mat3 a = input;
  Mat3 v = Mat3::identity();
  for (int sweep = 0; sweep < 60; ++sweep) {
    const double off = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    const double scale = a(0, 0) * a(0, 0) + a(1, 1) * a(1, 1) + a(2, 2) * a(2, 2);
    if (off <= 1e-34 * scale || off == 0.0) break;
    for (std::size_t p = 0; p < 2; ++p)
      for (std::size_t q = p + 1; q < 3; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < 3; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < 3; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < 3; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
  SymmetricEigen3 out;
  for (std::size_t i = 0; i < 3; ++i) {
    out.values[i] = a(order[i], order[i]);
    out.vectors[i] = {v(0, order[i]), v(1, order[i]), v(2, order[i])};
  }
  return out;
}

inline bool nearly_equal(double x, double y, double scale) { return std::abs(x - y) <= 1e-9 * scale; }

// Replaces the basis of a degenerate pair by Gram-Schmidt of x-hat (or y-hat) inside it.
inline void canonical_degenerate_pair(SymmetricEigen3& e, std::size_t i, std::size_t j, std::size_t other) {
  const Vec3& u = e.vectors[i];
  const Vec3& w = e.vectors[j];
  Vec3 first{};
  for (const Vec3 axis : {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}}) {
    const double cu = dot(u, axis), cw = dot(w, axis);
    const Vec3 p{cu * u[0] + cw * w[0], cu * u[1] + cw * w[1], cu * u[2] + cw * w[2]};
    if (norm(p) > 0.3) {
      first = normalized(p);
      break;
    }
  }
  const Vec3 second = normalized(cross(e.vectors[other], first));
  e.vectors[i] = first;
  e.vectors[j] = second;
}

}  // namespace detail

/**
 * Analytic (trigonometric) eigenvalues of a symmetric 3x3 matrix with
 * cross-product eigenvectors. Near a double root the analytic values lose
 * about half the digits, so whenever two of them agree to 1e-6 relative the
 * solver falls back to Jacobi iteration. A pair that Jacobi finds degenerate
 * to 1e-9 relative gets a deterministic basis built from x-hat, then y-hat.
 */
inline SymmetricEigen3 symmetric_eigen3(const Mat3& a) {
  if (!is_symmetric(a, 1e-12)) throw ValidationError("symmetric_eigen3: matrix is not symmetric");
  for (double v : a.data)
    if (!std::isfinite(v)) throw ValidationError("symmetric_eigen3: non-finite entry");

  const double scale = std::max(max_abs(a), 1e-300);
  const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
  const double q = (a(0, 0) + a(1, 1) + a(2, 2)) / 3.0;
  const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) +
                    (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
  SymmetricEigen3 out;
  if (p2 > 0.0) {
    const double p = std::sqrt(p2 / 6.0);
    const Mat3 b = (1.0 / p) * (a - q * Mat3::identity());
    const double r = std::clamp(determinant(b) / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    out.values[0] = q + 2.0 * p * std::cos(phi);
    out.values[2] = q + 2.0 * p * std::cos(phi + 2.0 * constants::pi / 3.0);
    out.values[1] = 3.0 * q - out.values[0] - out.values[2];
  } else {
    out.values = {q, q, q};
  }

  const bool close01 = std::abs(out.values[0] - out.values[1]) <= 1e-6 * scale;
  const bool close12 = std::abs(out.values[1] - out.values[2]) <= 1e-6 * scale;
  if (close01 || close12) {
    out = detail::jacobi(a);
    out.used_fallback = true;
    const bool d01 = detail::nearly_equal(out.values[0], out.values[1], scale);
    const bool d12 = detail::nearly_equal(out.values[1], out.values[2], scale);
    if (d01 && d12) {
      out.vectors = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
      return out;
    }
    if (d01) detail::canonical_degenerate_pair(out, 0, 1, 2);
    if (d12) detail::canonical_degenerate_pair(out, 1, 2, 0);
  } else {
    const Vec3 v0 = detail::null_vector(a, out.values[0]);
    Vec3 v2 = detail::null_vector(a, out.values[2]);
    // Enforce exact orthonormality.
    const double overlap = dot(v0, v2);
    v2 = detail::normalized({v2[0] - overlap * v0[0], v2[1] - overlap * v0[1], v2[2] - overlap * v0[2]});
    out.vectors = {v0, detail::normalized(cross(v2, v0)), v2};
  }
  for (auto& v : out.vectors) v = detail::canonical_sign(v);
  return out;
}

}  // namespace phonoscope::elastodynamics
