#pragma once

#include <cmath>
#include <vector>

#include "phonoscope/core/constants.hpp"
#include "phonoscope/core/parallel.hpp"
#include "phonoscope/emission/coupling.hpp"

namespace phonoscope::emission {

/** Discretization of the brute-force golden-rule sum. */
struct OracleGrid {
  int kz_levels = 2000;         // standing-wave levels centred on omega0
  int kperp_points = 2000;      // midpoint samples on [0, k_max]
  double freq_step = 0.0;       // spacing of the k_z levels in rad/s; 0 means broadening / 5
  double kmax_times_a = 200.0;  // k_max = kmax_times_a / a
  int azimuths = 8;             // directions averaged for non-radial fields
  unsigned threads = 1;
};

/**
 * Golden-rule rate from an explicit sum over discrete modes: k_z levels of a
 * resonator thick enough that its free spectral range equals freq_step, and
 * a radial k_perp quadrature. Energy conservation is broadened into a unit-area
 * Lorentzian of full width `broadening`. Converges to the analytic
 * longitudinal free-space rate.
 */
inline double fgr_discrete_oracle(const AcousticMedium& m, const DeviceGeometry& geom, double omega0,
                                  const fields::FieldProfile& profile, double broadening = constants::two_pi * 1e6,
                                  OracleGrid grid = {}) {
  m.validate();
  geom.validate();
  if (!(omega0 > 0.0)) throw ValidationError("fgr oracle: omega0 must be positive");
  if (!(broadening > 0.0)) throw ValidationError("fgr oracle: broadening must be positive");
  if (grid.freq_step == 0.0) grid.freq_step = broadening / 5.0;
  if (!(grid.freq_step > 0.0)) throw ValidationError("fgr oracle: frequency step must be positive");
  if (broadening < 3.0 * grid.freq_step) {
    throw ValidationError("fgr oracle: broadening is below 3x the frequency grid step (under-resolved)");
  }
  if (grid.kz_levels < 10 || grid.kperp_points < 10 || grid.azimuths < 1) {
    throw ValidationError("fgr oracle: grid too small");
  }

  const double b_eff = constants::pi * m.v_l / grid.freq_step;
  const double k_max = grid.kmax_times_a / geom.a;
  const double dk = k_max / grid.kperp_points;

  // Azimuthally averaged |E_z(k)|^2 on the k_perp midpoints.
  const fields::FieldTransform transform = fields::transform_of(profile, fields::Component::Z);
  const int azimuths = transform.radially_symmetric ? 1 : grid.azimuths;
  const std::vector<double> spectrum = parallel_map(
      static_cast<std::size_t>(grid.kperp_points), grid.threads, [&](std::size_t i) {
        const double k = (static_cast<double>(i) + 0.5) * dk;
        double s = 0.0;
        for (int a = 0; a < azimuths; ++a) {
          const double phi = constants::pi * a / azimuths;
          s += std::norm(transform(k * std::cos(phi), k * std::sin(phi)));
        }
        return s / azimuths;
      });

  const double n_centre = omega0 / grid.freq_step;
  const long n_first = std::max(1L, std::lround(n_centre) - grid.kz_levels / 2);
  const double half_width = 0.5 * broadening;
  const std::vector<double> per_level = parallel_map(
      static_cast<std::size_t>(grid.kz_levels), grid.threads, [&](std::size_t j) {
        const double n = static_cast<double>(n_first + static_cast<long>(j));
        const double omega_z = n * grid.freq_step;
        const double overlap = std::pow(std::sin(constants::pi * n * geom.b_p / (2.0 * b_eff)), 4);
        double s = 0.0;
        for (int i = 0; i < grid.kperp_points; ++i) {
          const double k = (i + 0.5) * dk;
          const double omega = std::sqrt(omega_z * omega_z + m.v_perp * m.v_perp * k * k);
          const double detuning = omega0 - omega;
          const double lorentz = (half_width / constants::pi) / (detuning * detuning + half_width * half_width);
          s += spectrum[static_cast<std::size_t>(i)] / omega * lorentz * k;
        }
        return s * overlap;
      });
  double total = 0.0;
  for (double v : per_level) total += v;
  // 2 pi |g|^2 summed: |g|^2 = 4 e33^2 |E(k)|^2 overlap / (hbar rho omega b_eff A), sum_k -> A int k dk / 2 pi.
  return constants::two_pi * 4.0 * m.e33 * m.e33 / (constants::hbar * m.rho * b_eff) * total * dk / constants::two_pi;
}

}  // namespace phonoscope::emission
