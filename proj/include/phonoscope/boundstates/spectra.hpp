#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "phonoscope/boundstates/bessel_roots.hpp"
#include "phonoscope/emission/coupling.hpp"

namespace phonoscope::boundstates {

struct BoundMode {
  int n = 0;
  int m = 0;
  int l = 0;  // 0 for dome modes
  double omega = 0.0;
  bool below_threshold = false;
};

struct BoundSpectrum {
  std::vector<BoundMode> modes;
  std::vector<std::string> warnings;
};

enum class DomeForm { kParaxial, kExact };

/** Strictly below omega_n; frequencies within 1e-9 relative of omega_n do not count. */
inline bool is_below_threshold(double omega, double omega_n) { return omega < omega_n * (1.0 - 1e-9); }

inline double acoustic_wavelength(const emission::AcousticMedium& med, double omega_n) {
  return constants::two_pi * med.v_l / omega_n;
}

/** Equidistant dome ladder omega_n(1 - z0/b) + v_perp (m+1)/sqrt(R b), m = 0..m_max. */
inline BoundSpectrum dome_spectrum(const emission::AcousticMedium& med, const emission::DeviceGeometry& geom, int n,
                                   int m_max, DomeForm form = DomeForm::kParaxial) {
  med.validate();
  const auto* dome = std::get_if<emission::Dome>(&geom.transducer);
  if (!dome) throw ValidationError("dome_spectrum: transducer is not a dome");
  if (m_max < 0) throw ValidationError("dome_spectrum: m_max must be non-negative");
  if (!(dome->r > 0.0) || !(dome->z0 >= 0.0) || !(dome->z0 < geom.b)) {
    throw ValidationError("dome_spectrum: need r > 0 and 0 <= z0 < b");
  }
  const double omega_n = emission::overtone_frequency(med, geom, n);
  BoundSpectrum out;
  const double lambda = acoustic_wavelength(med, omega_n);
  double step = 0.0;
  if (dome->z0 > 0.0) {
    const double rb = std::sqrt(dome->curvature_radius() * geom.b);
    step = med.v_perp / rb;
    if (!(lambda < 0.1 * rb)) out.warnings.push_back("dome: acoustic wavelength is not small against sqrt(R b)");
    if (!(dome->z0 < 0.1 * geom.b)) out.warnings.push_back("dome: z0 is not small against b");
  }
  for (int m = 0; m <= m_max; ++m) {
    BoundMode mode{n, m, 0, 0.0, false};
    if (form == DomeForm::kParaxial) {
      mode.omega = omega_n * (1.0 - dome->z0 / geom.b) + step * (m + 1);
    } else {
      mode.omega = std::sqrt(omega_n * omega_n * (1.0 - 2.0 * dome->z0 / geom.b) + 2.0 * omega_n * step * (m + 1));
    }
    mode.below_threshold = is_below_threshold(mode.omega, omega_n);
    out.modes.push_back(mode);
  }
  return out;
}

/** Closed-form dome bound 2 pi (z0/b)(v_l/v_perp) sqrt(R b)/lambda on m + 1. */
inline double dome_bound(const emission::AcousticMedium& med, const emission::DeviceGeometry& geom, double lambda) {
  const auto* dome = std::get_if<emission::Dome>(&geom.transducer);
  if (!dome) throw ValidationError("dome_bound: transducer is not a dome");
  return constants::two_pi * (dome->z0 / geom.b) * (med.v_l / med.v_perp) *
         std::sqrt(dome->curvature_radius() * geom.b) / lambda;
}

/** Cylinder modes omega_n(1 - z0/b) + mu_{m,l}^2 v_perp^2 / (2 omega_n r^2) for m in m_list, l = 1..l_max. */
inline BoundSpectrum cylinder_spectrum(const emission::AcousticMedium& med, const emission::DeviceGeometry& geom, int n,
                                       const std::vector<int>& m_list, int l_max) {
  med.validate();
  const auto* cyl = std::get_if<emission::Cylinder>(&geom.transducer);
  if (!cyl) throw ValidationError("cylinder_spectrum: transducer is not a cylinder");
  if (l_max < 1) throw ValidationError("cylinder_spectrum: l_max must be at least 1");
  const double omega_n = emission::overtone_frequency(med, geom, n);
  const double lambda = acoustic_wavelength(med, omega_n);
  BoundSpectrum out;
  if (!(cyl->r > 3.0 * std::sqrt(lambda * geom.b))) {
    out.warnings.push_back("cylinder: radius is not large against sqrt(lambda b); diffraction losses not small");
  }
  if (cyl->z0 < lambda) {
    out.warnings.push_back("cylinder: z0 below the acoustic wavelength; confinement condition not validated here");
  }
  for (int m : m_list) {
    if (m < 0) throw ValidationError("cylinder_spectrum: m must be non-negative");
    for (int l = 1; l <= l_max; ++l) {
      const double mu = bessel_root(m, l);
      BoundMode mode{n, m, l, 0.0, false};
      mode.omega = omega_n * (1.0 - cyl->z0 / geom.b) + mu * mu * med.v_perp * med.v_perp / (2.0 * omega_n * cyl->r * cyl->r);
      mode.below_threshold = is_below_threshold(mode.omega, omega_n);
      out.modes.push_back(mode);
    }
  }
  return out;
}

/** Bound on mu^2 for a cylinder mode to sit below threshold: 8 pi^2 (v_l/v_perp)^2 z0 r^2 / (b lambda^2). */
inline double cylinder_mu2_bound(const emission::AcousticMedium& med, const emission::DeviceGeometry& geom,
                                 double lambda) {
  const auto* cyl = std::get_if<emission::Cylinder>(&geom.transducer);
  if (!cyl) throw ValidationError("cylinder_mu2_bound: transducer is not a cylinder");
  const double ratio = med.v_l / med.v_perp;
  return 8.0 * constants::pi * constants::pi * ratio * ratio * cyl->z0 * cyl->r * cyl->r / (geom.b * lambda * lambda);
}

/** Number of l with mu_{m,l}^2 below the closed-form bound (the second counting route). */
inline int cylinder_bound_count(const emission::AcousticMedium& med, const emission::DeviceGeometry& geom, int n, int m) {
  const double omega_n = emission::overtone_frequency(med, geom, n);
  const double bound = cylinder_mu2_bound(med, geom, acoustic_wavelength(med, omega_n));
  int count = 0;
  for (int l = 1;; ++l) {
    const double mu = bessel_root(m, l);
    if (!(mu * mu < bound)) break;
    ++count;
  }
  return count;
}

/** Whether the qubit couples to a mode: even m under a dome, m = 0 under a cylinder. */
inline bool couples_to_qubit(const BoundMode& mode, const emission::Transducer& transducer) {
  if (std::holds_alternative<emission::Dome>(transducer)) return mode.m % 2 == 0;
  if (std::holds_alternative<emission::Cylinder>(transducer)) return mode.m == 0;
  return false;
}

inline int resolvable_count(const BoundSpectrum& s, const emission::Transducer& transducer) {
  int count = 0;
  for (const auto& mode : s.modes)
    if (mode.below_threshold && couples_to_qubit(mode, transducer)) ++count;
  return count;
}

/**
 * Frequencies (rad/s) of below-threshold, qubit-coupled modes shifted by a
 * constant offset and kept if they fall inside the open window (lo, hi).
 */
inline std::vector<double> stick_spectrum(const std::vector<BoundMode>& modes, const emission::Transducer& transducer,
                                          double window_lo, double window_hi, double offset = 0.0) {
  if (!(window_hi > window_lo)) throw ValidationError("stick_spectrum: empty frequency window");
  std::vector<double> out;
  for (const auto& mode : modes) {
    if (!mode.below_threshold || !couples_to_qubit(mode, transducer)) continue;
    const double f = mode.omega + offset;
    if (f > window_lo && f < window_hi) out.push_back(f);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/** Modes of every overtone whose band can reach [omega_lo, omega_hi], qubit-coupled indices only. */
inline std::vector<BoundMode> modes_in_range(const emission::AcousticMedium& med, const emission::DeviceGeometry& geom,
                                             double omega_lo, double omega_hi, int transverse_max = 60) {
  if (!(omega_hi > omega_lo) || !(omega_lo > 0.0)) throw ValidationError("modes_in_range: bad frequency range");
  const double fsr = constants::pi * med.v_l / geom.b;
  const int n_lo = std::max(1, static_cast<int>(std::floor(omega_lo / fsr)));
  const int n_hi = static_cast<int>(std::ceil(omega_hi / fsr)) + 1;
  std::vector<BoundMode> out;
  for (int n = n_lo; n <= n_hi; ++n) {
    BoundSpectrum s;
    if (std::holds_alternative<emission::Dome>(geom.transducer)) {
      s = dome_spectrum(med, geom, n, transverse_max);
    } else if (std::holds_alternative<emission::Cylinder>(geom.transducer)) {
      s = cylinder_spectrum(med, geom, n, {0}, transverse_max);
    } else {
      throw ValidationError("modes_in_range: geometry has no bound states");
    }
    for (const auto& mode : s.modes)
      if (couples_to_qubit(mode, geom.transducer) && mode.omega >= omega_lo && mode.omega <= omega_hi) out.push_back(mode);
  }
  return out;
}

}  // namespace phonoscope::boundstates
