#pragma once

#include <cmath>

#include "phonoscope/fields/profile.hpp"

namespace phonoscope::fields {

/**
 * Parameters of the synthetic ringmon-like field used as the reference map.
 * E_z follows the rim-peaked surface charge of a thin circular pad and of a
 * concentric ring of opposite sign (net charge zero). The in-plane field is
 * radial, strongest in the gap between pad and ring, with separate x and y
 * scales. All three components are scaled so their squared integrals hit
 * the targets exactly on the sampled grid.
 */
struct ReferenceFieldSpec {
  double pad_radius = 140e-6;
  double ring_inner = 190e-6;
  double ring_outer = 340e-6;
  double rim_softening = 3e-6;   // regularizes the 1/sqrt rim singularity
  double edge_width = 1e-6;      // tanh roll-off at conductor edges
  double half_extent = 400e-6;
  double spacing = 4e-6;
  double target_x = 2.33e-10;    // V^2
  double target_y = 2.17e-10;
  double target_z = 5.75e-10;
};

inline SampledGrid make_reference_field(const ReferenceFieldSpec& s = {}) {
  if (!(s.spacing > 0.0) || !(s.half_extent > s.ring_outer)) throw ValidationError("reference field: bad extent");
  if (!(0.0 < s.pad_radius && s.pad_radius < s.ring_inner && s.ring_inner < s.ring_outer)) {
    throw ValidationError("reference field: need pad radius < ring inner < ring outer");
  }
  SampledGrid g;
  g.nx = g.ny = 2 * static_cast<std::size_t>(std::llround(s.half_extent / s.spacing)) + 1;
  g.dx = g.dy = s.spacing;

  const double w2 = s.rim_softening * s.rim_softening;
  auto step = [&](double d) { return 0.5 * (1.0 + std::tanh(d / s.edge_width)); };
  auto pad = [&](double r) {
    return step(s.pad_radius - r) / std::sqrt(std::max(s.pad_radius * s.pad_radius - r * r, 0.0) + w2);
  };
  const double centre = 0.5 * (s.ring_inner + s.ring_outer);
  const double half_width = 0.5 * (s.ring_outer - s.ring_inner);
  auto ring = [&](double r) {
    const double d = r - centre;
    return step(half_width - std::abs(d)) / std::sqrt(std::max(half_width * half_width - d * d, 0.0) + w2);
  };
  // Radial in-plane field: 1/r between the conductors, rolled off at both edges.
  auto radial = [&](double r) {
    if (r <= 0.0) return 0.0;
    return step(r - s.pad_radius) * step(s.ring_inner - r) / r;
  };

  const std::size_t n = g.nx * g.ny;
  std::vector<double> p(n), q(n), er(n), cosphi(n), sinphi(n);
  double pad_sum = 0.0, ring_sum = 0.0;
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      const std::size_t k = j * g.nx + i;
      const double x = g.x(i), y = g.y(j), r = std::hypot(x, y);
      p[k] = pad(r);
      q[k] = ring(r);
      er[k] = radial(r);
      cosphi[k] = r > 0.0 ? x / r : 0.0;
      sinphi[k] = r > 0.0 ? y / r : 0.0;
      pad_sum += p[k];
      ring_sum += q[k];
    }
  const double balance = pad_sum / ring_sum;
  auto& ex = g.values[0];
  auto& ey = g.values[1];
  auto& ez = g.values[2];
  ex.resize(n);
  ey.resize(n);
  ez.resize(n);
  double sx = 0.0, sy = 0.0, sz = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    ez[k] = p[k] - balance * q[k];
    ex[k] = er[k] * cosphi[k];
    ey[k] = er[k] * sinphi[k];
    sx += ex[k] * ex[k];
    sy += ey[k] * ey[k];
    sz += ez[k] * ez[k];
  }
  const double cell = g.dx * g.dy;
  const double fx = std::sqrt(s.target_x / (sx * cell));
  const double fy = std::sqrt(s.target_y / (sy * cell));
  const double fz = std::sqrt(s.target_z / (sz * cell));
  for (std::size_t k = 0; k < n; ++k) {
    ex[k] *= fx;
    ey[k] *= fy;
    ez[k] *= fz;
  }
  return g;
}

}  // namespace phonoscope::fields
