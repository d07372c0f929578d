#pragma once

#include <cmath>
#include <optional>
#include <variant>

#include "phonoscope/core/constants.hpp"
#include "phonoscope/core/error.hpp"

namespace phonoscope::emission {

struct Flat {};

/** Parabolic dome of height z0 and footprint radius r. */
struct Dome {
  double z0 = 0.0;
  double r = 0.0;
  double curvature_radius() const { return r * r / (2.0 * z0); }
};

/** Flat-topped cylinder of height z0 and radius r. */
struct Cylinder {
  double z0 = 0.0;
  double r = 0.0;
};

using Transducer = std::variant<Flat, Dome, Cylinder>;

/** Resonator thickness b, piezo film thickness b_p, pad radius a (all metres). */
struct DeviceGeometry {
  double b = 0.0;
  double b_p = 0.0;
  double a = 0.0;
  Transducer transducer = Flat{};
  std::optional<int> overtone;

  void validate() const {
    if (!(b > 0.0) || !std::isfinite(b)) throw ValidationError("geometry: b must be positive");
    if (!(b_p > 0.0) || !(b_p < b / 10.0)) throw ValidationError("geometry: need 0 < b_p < b/10");
    if (!(a > 0.0) || !std::isfinite(a)) throw ValidationError("geometry: pad radius a must be positive");
    if (overtone && *overtone <= 0) throw ValidationError("geometry: overtone must be positive");
    auto check = [&](double z0, double r) {
      if (!(z0 > 0.0) || !(z0 < b)) throw ValidationError("geometry: transducer height must satisfy 0 < z0 < b");
      if (!(r > 0.0)) throw ValidationError("geometry: transducer radius must be positive");
    };
    if (const auto* d = std::get_if<Dome>(&transducer)) check(d->z0, d->r);
    if (const auto* c = std::get_if<Cylinder>(&transducer)) check(c->z0, c->r);
  }

  double mode_volume() const { return b * constants::pi * a * a; }

  /** Radius of curvature r^2/(2 z0) of a dome transducer. */
  double dome_curvature() const {
    const auto* d = std::get_if<Dome>(&transducer);
    if (!d) throw ValidationError("geometry: transducer is not a dome");
    return d->curvature_radius();
  }
};

}  // namespace phonoscope::emission
