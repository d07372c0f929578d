#pragma once

#include <cmath>
#include <optional>

#include "phonoscope/materials/tensors.hpp"

namespace phonoscope::emission {

/**
 * What the emission formulas need: density and velocities of the resonator
 * crystal plus the stress-form constants e33, e15 of the piezoelectric film.
 * The film/substrate velocity difference is neglected.
 */
struct AcousticMedium {
  double rho = 0.0;
  double v_l = 0.0;
  double v_sh = 0.0;
  double v_perp = 0.0;
  double e33 = 0.0;
  double e15 = 0.0;

  void validate() const {
    if (!(rho > 0.0)) throw ValidationError("medium: density must be positive");
    if (!(v_l > 0.0) || !(v_sh > 0.0) || !(v_perp > 0.0)) throw ValidationError("medium: velocities must be positive");
    if (!std::isfinite(e33) || !std::isfinite(e15)) throw ValidationError("medium: piezo constants must be finite");
  }
};

/** Substrate sets rho and velocities; film sets e33 and e15 (its e, or d c if e is absent). */
inline AcousticMedium make_medium(const materials::MaterialTensorSet& substrate,
                                  const materials::MaterialTensorSet& film) {
  const auto v = materials::axis_velocities(substrate);
  const auto e = materials::piezo_stress_form(film);
  AcousticMedium m;
  m.rho = substrate.rho;
  m.v_l = v.v_l;
  m.v_sh = v.v_sh;
  m.v_perp = v.v_perp;
  m.e33 = e(2, 2);
  m.e15 = e(0, 4);
  return m;
}

/** Medium for a single material that is itself piezoelectric. */
inline AcousticMedium make_medium(const materials::MaterialTensorSet& mat) { return make_medium(mat, mat); }

}  // namespace phonoscope::emission
