#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "phonoscope/core/constants.hpp"
#include "phonoscope/core/parallel.hpp"
#include "phonoscope/elastodynamics/symmetric_eigen.hpp"
#include "phonoscope/materials/tensors.hpp"

namespace phonoscope::elastodynamics {

/** Polar angle theta from the c-axis (z) and azimuth phi from x, radians. */
struct PropagationDirection {
  double theta = 0.0;
  double phi = 0.0;

  Vec3 unit() const {
    if (!(theta >= 0.0 && theta <= constants::pi)) {
      throw ValidationError("propagation direction: theta must lie in [0, pi]");
    }
    if (!std::isfinite(phi)) throw ValidationError("propagation direction: phi must be finite");
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
  }
};

/** Voigt index of the symmetric pair (i, j). */
constexpr std::size_t voigt_index(std::size_t i, std::size_t j) {
  if (i == j) return i;
  const std::size_t s = i + j;  // (1,2)->3, (0,2)->4, (0,1)->5
  return s == 3 ? 3 : (s == 2 ? 4 : 5);
}

/** M_il = c_ijkl n_j n_k / rho, in (m/s)^2. */
inline Mat3 christoffel_matrix(const materials::Stiffness& c, double rho, const Vec3& n) {
  if (!(rho > 0.0)) throw ValidationError("christoffel_matrix: density must be positive");
  const double nn = norm(n);
  if (!(nn > 0.0) || std::abs(nn - 1.0) > 1e-9) throw ValidationError("christoffel_matrix: n must be a unit vector");
  Mat3 m{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t l = 0; l < 3; ++l) {
      double s = 0.0;
      for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < 3; ++k) s += c(voigt_index(i, j), voigt_index(k, l)) * n[j] * n[k];
      m(i, l) = s / rho;
    }
  return m;
}

inline Mat3 christoffel_matrix(const materials::MaterialTensorSet& mat, const PropagationDirection& dir) {
  return christoffel_matrix(materials::effective_stiffness(mat), mat.rho, dir.unit());
}

/** Three phase velocities with their polarizations, sorted by descending velocity. */
struct PolarizedVelocities {
  std::array<double, 3> velocity{};
  std::array<Vec3, 3> polarization{};
};

inline PolarizedVelocities solve_christoffel(const Mat3& m) {
  const SymmetricEigen3 e = symmetric_eigen3(m);
  PolarizedVelocities out;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!(e.values[i] > 0.0)) throw DomainError("solve_christoffel: non-positive eigenvalue");
    out.velocity[i] = std::sqrt(e.values[i]);
    out.polarization[i] = e.vectors[i];
  }
  return out;
}

struct SurfaceSample {
  double theta = 0.0;
  PolarizedVelocities branches;  // ordered for continuity in theta, not by speed
};

/**
 * Velocities on theta in [theta_min, theta_max] at fixed azimuth. Branches
 * keep their identity between samples by maximal polarization overlap.
 */
inline std::vector<SurfaceSample> velocity_surface(const materials::MaterialTensorSet& mat, double phi,
                                                   std::size_t samples, double theta_min = 0.0,
                                                   double theta_max = constants::pi, unsigned threads = 1) {
  if (samples < 2) throw ValidationError("velocity_surface: need at least two samples");
  if (!(theta_min >= 0.0 && theta_max <= constants::pi && theta_min < theta_max)) {
    throw ValidationError("velocity_surface: theta range must lie in [0, pi] and be increasing");
  }
  const materials::Stiffness c = materials::effective_stiffness(mat);
  auto solved = parallel_map(samples, threads, [&](std::size_t k) {
    SurfaceSample s;
    s.theta = theta_min + (theta_max - theta_min) * static_cast<double>(k) / static_cast<double>(samples - 1);
    s.branches = solve_christoffel(christoffel_matrix(c, mat.rho, PropagationDirection{s.theta, phi}.unit()));
    return s;
  });
  static constexpr std::array<std::array<std::size_t, 3>, 6> perms{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  for (std::size_t k = 1; k < samples; ++k) {
    const auto& prev = solved[k - 1].branches;
    const auto cur = solved[k].branches;
    std::size_t best = 0;
    double best_score = -1.0;
    for (std::size_t p = 0; p < perms.size(); ++p) {
      double score = 0.0;
      for (std::size_t i = 0; i < 3; ++i) score += std::abs(dot(prev.polarization[i], cur.polarization[perms[p][i]]));
      if (score > best_score + 1e-12) {
        best_score = score;
        best = p;
      }
    }
    for (std::size_t i = 0; i < 3; ++i) {
      const std::size_t src = perms[best][i];
      Vec3 pol = cur.polarization[src];
      if (dot(prev.polarization[i], pol) < 0.0) pol = {-pol[0], -pol[1], -pol[2]};
      solved[k].branches.velocity[i] = cur.velocity[src];
      solved[k].branches.polarization[i] = pol;
    }
  }
  return solved;
}

}  // namespace phonoscope::elastodynamics
