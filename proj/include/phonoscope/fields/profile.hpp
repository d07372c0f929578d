#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "phonoscope/core/constants.hpp"
#include "phonoscope/core/error.hpp"
#include "phonoscope/special/bessel.hpp"

namespace phonoscope::fields {

enum class Component { X = 0, Y = 1, Z = 2 };

inline std::string component_name(Component c) {
  static const char* names[] = {"Ex", "Ey", "Ez"};
  return names[static_cast<int>(c)];
}

inline Component parse_component(const std::string& s) {
  if (s == "x" || s == "Ex" || s == "X") return Component::X;
  if (s == "y" || s == "Ey" || s == "Y") return Component::Y;
  if (s == "z" || s == "Ez" || s == "Z") return Component::Z;
  throw ValidationError("unknown field component '" + s + "'");
}

/** Uniform E_z inside a disk of radius a, zero outside. */
struct UniformDisk {
  double ez = 0.0;      // V/m
  double radius = 0.0;  // m

  void validate() const {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw ValidationError("uniform disk: radius must be positive");
    if (!std::isfinite(ez)) throw ValidationError("uniform disk: field must be finite");
  }
};

/**
 * Field sampled on a regular grid centred on the origin: cell (i, j) sits at
 * x = (i - (nx-1)/2) dx, y = (j - (ny-1)/2) dy. Values are row-major with j
 * the row index. Components that were not supplied are empty.
 */
struct SampledGrid {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double dx = 0.0;
  double dy = 0.0;
  std::array<std::vector<double>, 3> values;

  bool has(Component c) const { return !values[static_cast<int>(c)].empty(); }

  const std::vector<double>& component(Component c) const {
    if (!has(c)) throw ValidationError("sampled grid has no " + component_name(c) + " component");
    return values[static_cast<int>(c)];
  }

  double x(std::size_t i) const { return (static_cast<double>(i) - 0.5 * static_cast<double>(nx - 1)) * dx; }
  double y(std::size_t j) const { return (static_cast<double>(j) - 0.5 * static_cast<double>(ny - 1)) * dy; }

  void validate() const {
    if (nx < 2 || ny < 2) throw ValidationError("sampled grid: need at least 2x2 samples");
    if (!(dx > 0.0) || !(dy > 0.0)) throw ValidationError("sampled grid: spacing must be positive");
    bool any = false;
    for (const auto& v : values) {
      if (v.empty()) continue;
      any = true;
      if (v.size() != nx * ny) throw ValidationError("sampled grid: component size does not match nx*ny");
      for (double e : v)
        if (!std::isfinite(e)) throw ValidationError("sampled grid: non-finite field value");
    }
    if (!any) throw ValidationError("sampled grid: no field components");
  }
};

using FieldProfile = std::variant<UniformDisk, SampledGrid>;

/** Integral of E_component^2 over the plane (V^2). */
inline double squared_field_integral(const FieldProfile& profile, Component c) {
  if (const auto* disk = std::get_if<UniformDisk>(&profile)) {
    disk->validate();
    if (c != Component::Z) throw ValidationError("uniform disk profile only carries E_z");
    return disk->ez * disk->ez * constants::pi * disk->radius * disk->radius;
  }
  const auto& grid = std::get<SampledGrid>(profile);
  grid.validate();
  double s = 0.0;
  for (double e : grid.component(c)) s += e * e;
  return s * grid.dx * grid.dy;
}

/** Fourier transform of a uniform disk: E_z pi a^2 * 2 J1(ka)/(ka). */
inline double disk_transform(double ez, double a, double k) {
  if (!(a > 0.0)) throw ValidationError("disk_transform: radius must be positive");
  if (!(k >= 0.0)) throw ValidationError("disk_transform: k must be non-negative");
  const double area = constants::pi * a * a;
  const double ka = k * a;
  if (ka < 1e-8) return ez * area * (1.0 - ka * ka / 8.0);
  return ez * area * 2.0 * special::bessel_kernel(ka, special::BesselKind::J1) / ka;
}

/** Direct-sum transform of one grid component: sum E(x,y) exp(-i(kx x + ky y)) dx dy. */
inline std::complex<double> grid_transform(const SampledGrid& grid, Component c, double kx, double ky) {
  const auto& v = grid.component(c);
  std::vector<std::complex<double>> phase_x(grid.nx);
  for (std::size_t i = 0; i < grid.nx; ++i) phase_x[i] = std::polar(1.0, -kx * grid.x(i));
  std::complex<double> total = 0.0;
  for (std::size_t j = 0; j < grid.ny; ++j) {
    std::complex<double> row = 0.0;
    const double* r = v.data() + j * grid.nx;
    for (std::size_t i = 0; i < grid.nx; ++i) row += r[i] * phase_x[i];
    total += row * std::polar(1.0, -ky * grid.y(j));
  }
  return total * grid.dx * grid.dy;
}

/** Transform of the z-component as a callable of (kx, ky). */
struct FieldTransform {
  std::function<std::complex<double>(double, double)> at;
  bool radially_symmetric = false;

  std::complex<double> operator()(double kx, double ky) const { return at(kx, ky); }
};

inline FieldTransform transform_of(const FieldProfile& profile, Component c = Component::Z) {
  if (const auto* disk = std::get_if<UniformDisk>(&profile)) {
    disk->validate();
    if (c != Component::Z) throw ValidationError("uniform disk profile only carries E_z");
    const UniformDisk d = *disk;
    return {[d](double kx, double ky) {
              return std::complex<double>(disk_transform(d.ez, d.radius, std::hypot(kx, ky)), 0.0);
            },
            true};
  }
  auto grid = std::make_shared<SampledGrid>(std::get<SampledGrid>(profile));
  grid->validate();
  grid->component(c);
  return {[grid, c](double kx, double ky) { return grid_transform(*grid, c, kx, ky); }, false};
}

/** Root-mean-square field over a disk of radius a: sqrt(int E^2 / (pi a^2)). */
inline double rms_over_disk(const FieldProfile& profile, Component c, double a) {
  if (!(a > 0.0)) throw ValidationError("rms_over_disk: radius must be positive");
  return std::sqrt(squared_field_integral(profile, c) / (constants::pi * a * a));
}

}  // namespace phonoscope::fields
