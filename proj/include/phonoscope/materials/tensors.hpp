#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>

#include "phonoscope/core/constants.hpp"
#include "phonoscope/core/error.hpp"
#include "phonoscope/core/matrix.hpp"

namespace phonoscope::materials {

using Stiffness = Matrix<6, 6>;         // Pa, Voigt notation
using PiezoTensor = Matrix<3, 6>;       // d in m/V, e in C/m^2
using DielectricTensor = Matrix<3, 3>;  // relative permittivity

/** Elastic, piezoelectric and dielectric data of one medium, SI units. */
struct MaterialTensorSet {
  std::string name;
  double rho = 0.0;
  Stiffness c{};
  std::optional<PiezoTensor> d;
  std::optional<PiezoTensor> e;
  std::optional<DielectricTensor> eps;

  bool is_piezoelectric() const { return d.has_value() || e.has_value(); }

  /** Checks density, symmetry and positive definiteness of c. */
  void validate() const {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw ValidationError(name + ": density must be positive");
    for (double v : c.data)
      if (!std::isfinite(v)) throw ValidationError(name + ": stiffness has non-finite entries");
    if (!is_symmetric(c, 1e-9)) throw ValidationError(name + ": stiffness is not symmetric");
    if (!is_positive_definite(c)) throw ValidationError(name + ": stiffness is not positive definite");
    if (d && e) {
      // A preset carrying both forms must satisfy e = d c to 1% elementwise.
      const PiezoTensor dc = *d * c;
      const double scale = max_abs(*e);
      for (std::size_t k = 0; k < dc.data.size(); ++k) {
        const double ref = e->data[k];
        if (std::abs(dc.data[k] - ref) > 0.01 * std::max(std::abs(ref), 1e-6 * scale)) {
          throw ValidationError(name + ": stored e and d c disagree by more than 1%");
        }
      }
    }
    if (eps) {
      if (!is_symmetric(*eps, 1e-9)) throw ValidationError(name + ": permittivity is not symmetric");
      if (!is_positive_definite(*eps)) throw ValidationError(name + ": permittivity is not positive definite");
    }
  }
};

/** e = d c  (stress-form piezoelectric tensor from the strain form). */
inline PiezoTensor stress_form_from_strain_form(const PiezoTensor& d, const Stiffness& c) { return d * c; }

/** Same as above for flat row-major inputs of unchecked size (3x6 and 6x6). */
inline PiezoTensor stress_form_from_strain_form(std::span<const double> d, std::span<const double> c) {
  return stress_form_from_strain_form(PiezoTensor::from_row_major(d, "strain-form piezo tensor d"),
                                      Stiffness::from_row_major(c, "stiffness c"));
}

/** c^D = c^E + e^T (eps0 eps)^-1 e. Throws DomainError for a singular permittivity. */
inline Stiffness stiffened_tensor(const Stiffness& c, const PiezoTensor& e, const DielectricTensor& eps) {
  const Mat3 inv = inverse(constants::epsilon0 * eps);
  return c + e.transposed() * (inv * e);
}

/** Stress-form tensor of a piezoelectric medium: stored e if present, else d c. */
inline PiezoTensor piezo_stress_form(const MaterialTensorSet& m) {
  if (m.e) return *m.e;
  if (m.d) return stress_form_from_strain_form(*m.d, m.c);
  throw ValidationError(m.name + ": material is not piezoelectric");
}

/** Stiffness that governs acoustic propagation: c^D for piezoelectrics, c otherwise. */
inline Stiffness effective_stiffness(const MaterialTensorSet& m) {
  if (!m.is_piezoelectric()) return m.c;
  if (!m.eps) throw ValidationError(m.name + ": piezoelectric material needs a permittivity");
  return stiffened_tensor(m.c, piezo_stress_form(m), *m.eps);
}

/** Characteristic velocities along the c-axis (m/s). */
struct WaveVelocities {
  double v_l = 0.0;     // longitudinal
  double v_sh = 0.0;    // shear
  double v_perp = 0.0;  // transverse-dispersion velocity of longitudinal modes
};

inline WaveVelocities axis_velocities(const Stiffness& c, double rho) {
  if (!(rho > 0.0)) throw ValidationError("axis_velocities: density must be positive");
  const double c33 = c(2, 2), c44 = c(3, 3), c13 = c(0, 2);
  if (!(c33 > c44) || !(c44 > 0.0)) throw DomainError("axis_velocities: need c33 > c44 > 0");
  WaveVelocities v;
  v.v_l = std::sqrt(c33 / rho);
  v.v_sh = std::sqrt(c44 / rho);
  v.v_perp = std::sqrt((c44 + (c13 + c44) * (c13 + c44) / (c33 - c44)) / rho);
  return v;
}

inline WaveVelocities axis_velocities(const MaterialTensorSet& m) { return axis_velocities(m.c, m.rho); }

}  // namespace phonoscope::materials
