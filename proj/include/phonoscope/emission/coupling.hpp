#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "phonoscope/boundstates/bessel_roots.hpp"
#include "phonoscope/core/constants.hpp"
#include "phonoscope/emission/geometry.hpp"
#include "phonoscope/emission/medium.hpp"
#include "phonoscope/fields/profile.hpp"
#include "phonoscope/special/bessel.hpp"

namespace phonoscope::emission {

/** Mode label: overtone n plus transverse indices (m, l); unused indices are 0. */
struct ModeId {
  int n = 0;
  int m = 0;
  int l = 0;
};

struct CouplingResult {
  double g = 0.0;      // rad/s, reported non-negative
  ModeId mode;
  double omega = 0.0;  // rad/s
};

/** Longitudinal standing-wave frequency pi n v_l / b. */
inline double overtone_frequency(const AcousticMedium& m, const DeviceGeometry& geom, int n) {
  if (n <= 0) throw ValidationError("overtone number must be positive");
  return constants::pi * n * m.v_l / geom.b;
}

/** Overtone whose frequency is closest to omega. */
inline int nearest_overtone(const AcousticMedium& m, const DeviceGeometry& geom, double omega) {
  const int n = static_cast<int>(std::lround(omega * geom.b / (constants::pi * m.v_l)));
  return std::max(n, 1);
}

inline double film_overlap(const DeviceGeometry& geom, int n) {
  const double s = std::sin(constants::pi * n * geom.b_p / (2.0 * geom.b));
  return s * s;
}

/** Coupling to the flat-resonator standing wave n for a uniform field E_z on a pad of radius a. */
inline CouplingResult standing_wave_coupling(const AcousticMedium& m, const DeviceGeometry& geom, int n, double ez,
                                             double a) {
  m.validate();
  geom.validate();
  if (!(a > 0.0)) throw ValidationError("standing_wave_coupling: pad radius must be positive");
  const double omega_n = overtone_frequency(m, geom, n);
  const double v_mode = geom.b * constants::pi * a * a;
  const double g = 2.0 * m.e33 / std::sqrt(constants::hbar * m.rho * omega_n * v_mode) * film_overlap(geom, n) * ez *
                   constants::pi * a * a;
  return {std::abs(g), {n, 0, 0}, omega_n};
}

/** Dispersion omega_n(k) = sqrt((pi n v_l / b)^2 + v_perp^2 k^2). */
inline double overtone_dispersion(const AcousticMedium& m, const DeviceGeometry& geom, int n, double k_perp) {
  const double w = overtone_frequency(m, geom, n);
  return std::sqrt(w * w + m.v_perp * m.v_perp * k_perp * k_perp);
}

/** Coupling to the plane-wave mode (n, k_perp) with normalization volume v_cav (complex, phase kept). */
inline std::complex<double> mode_coupling_k(const DeviceGeometry& geom, const AcousticMedium& m, int n, double kx,
                                            double ky, const fields::FieldTransform& transform, double v_cav) {
  if (!(v_cav > 0.0)) throw ValidationError("mode_coupling_k: normalization volume must be positive");
  const double omega = overtone_dispersion(m, geom, n, std::hypot(kx, ky));
  return 2.0 * m.e33 * transform(kx, ky) * film_overlap(geom, n) / std::sqrt(constants::hbar * m.rho * omega * v_cav);
}

/** omega_diff = v_perp^2 pi^2 / (2 omega_n a^2). */
inline double diffraction_scale(const DeviceGeometry& geom, const AcousticMedium& m, double omega_n) {
  if (!(omega_n > 0.0)) throw ValidationError("diffraction_scale: omega_n must be positive");
  if (!(geom.a > 0.0)) throw ValidationError("diffraction_scale: pad radius must be positive");
  return m.v_perp * m.v_perp * constants::pi * constants::pi / (2.0 * omega_n * geom.a * geom.a);
}

/** Frequency of the cylinder mode (n, m, l) in the paraxial form. */
inline double cylinder_mode_frequency(const AcousticMedium& med, const DeviceGeometry& geom, const Cylinder& cyl,
                                      int n, int m, int l) {
  const double omega_n = overtone_frequency(med, geom, n);
  const double mu = boundstates::bessel_root(m, l);
  return omega_n * (1.0 - cyl.z0 / geom.b) + mu * mu * med.v_perp * med.v_perp / (2.0 * omega_n * cyl.r * cyl.r);
}

/** int_{r_perp < r} E_z [J0(mu r_perp/r)/J1(mu)]^2 d^2r, the mode-shape overlap of the principal mode. */
inline double cylinder_overlap_integral(const fields::FieldProfile& profile, double r) {
  const double mu = boundstates::bessel_root(0, 1);
  const double j1mu = special::bessel_kernel(mu, special::BesselKind::J1);
  auto weight = [&](double rho) {
    const double u = special::bessel_kernel(mu * rho / r, special::BesselKind::J0) / j1mu;
    return u * u;
  };
  if (const auto* disk = std::get_if<fields::UniformDisk>(&profile)) {
    disk->validate();
    // Gauss-Legendre on [0, min(a, r)] in rho, integrand E_z w(rho) 2 pi rho.
    const double upper = std::min(disk->radius, r);
    static constexpr std::array<double, 5> x{0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                                              0.8650633666889845, 0.9739065285171717};
    static constexpr std::array<double, 5> w{0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                                              0.1494513491505806, 0.0666713443086881};
    double sum = 0.0;
    const int panels = 64;
    for (int p = 0; p < panels; ++p) {
      const double lo = upper * p / panels, hi = upper * (p + 1) / panels;
      const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
      for (int k = 0; k < 5; ++k)
        for (double s : {-1.0, 1.0}) {
          const double rho = c + s * h * x[k];
          sum += w[k] * h * weight(rho) * constants::two_pi * rho;
        }
    }
    return disk->ez * sum;
  }
  const auto& grid = std::get<fields::SampledGrid>(profile);
  grid.validate();
  const auto& ez = grid.component(fields::Component::Z);
  double sum = 0.0;
  for (std::size_t j = 0; j < grid.ny; ++j)
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const double rho = std::hypot(grid.x(i), grid.y(j));
      if (rho < r) sum += ez[j * grid.nx + i] * weight(rho);
    }
  return sum * grid.dx * grid.dy;
}

/**
 * Coupling to the principal (m = 0, l = 1) bound mode of overtone n under a
 * cylinder transducer. The squared mode-shape weight inside the overlap
 * integral follows the published expression.
 */
inline CouplingResult cylinder_principal_coupling(const AcousticMedium& m, const DeviceGeometry& geom, int n,
                                                  const fields::FieldProfile& profile) {
  m.validate();
  geom.validate();
  const auto* cyl = std::get_if<Cylinder>(&geom.transducer);
  if (!cyl) throw ValidationError("cylinder_principal_coupling: transducer is not a cylinder");
  const double omega = cylinder_mode_frequency(m, geom, *cyl, n, 0, 1);
  const double s = std::sin(omega * cyl->z0 / (2.0 * m.v_l));
  const double g = 2.0 * m.e33 / std::sqrt(constants::hbar * m.rho * omega * geom.b * constants::pi * cyl->r * cyl->r) *
                   s * s * cylinder_overlap_integral(profile, cyl->r);
  return {std::abs(g), {n, 0, 1}, omega};
}

}  // namespace phonoscope::emission
