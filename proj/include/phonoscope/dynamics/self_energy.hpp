#pragma once

#include <cmath>
#include <complex>
#include <utility>

#include "phonoscope/core/constants.hpp"
#include "phonoscope/core/error.hpp"
#include "phonoscope/special/bessel.hpp"

namespace phonoscope::dynamics {

using special::BesselKind;

/** Coupling g, standing-wave frequency omega_n and diffraction scale omega_diff (rad/s). */
struct SelfEnergyParams {
  double g = 0.0;
  double omega_n = 0.0;
  double omega_diff = 0.0;

  void validate() const {
    if (!(g > 0.0) || !(omega_n > 0.0) || !(omega_diff > 0.0) || !std::isfinite(g) || !std::isfinite(omega_n) ||
        !std::isfinite(omega_diff)) {
      throw ValidationError("self-energy parameters must be positive and finite");
    }
  }
};

/** Argument pi sqrt(|nu| / omega_diff) of the Bessel functions at detuning nu = omega - omega_n. */
inline double threshold_argument(double nu, double omega_diff) {
  return constants::pi * std::sqrt(std::abs(nu) / omega_diff);
}

/**
 * Self-energy as a function of nu = omega - omega_n (nu != 0).
 * nu < 0: g^2 (1 - 2 I1 K1)/nu, real.  nu > 0: g^2 (1 + pi J1 Y1 - i pi J1^2)/nu.
 * Both are written as functions of x with the 1/nu = +-pi^2/(x^2 omega_diff)
 * factor folded in, which keeps them finite down to tiny |nu|.
 */
inline std::complex<double> self_energy_detuned(double nu, const SelfEnergyParams& p) {
  const double scale = p.g * p.g * constants::pi * constants::pi / p.omega_diff;
  const double x = threshold_argument(nu, p.omega_diff);
  if (nu < 0.0) return {-scale * special::below_threshold_factor_over_x2(x), 0.0};
  const double j1_over_x = x > 1e-150 ? special::bessel_kernel(x, BesselKind::J1) / x : 0.5;
  return {scale * special::above_threshold_factor_over_x2(x), -scale * constants::pi * j1_over_x * j1_over_x};
}

/**
 * Sigma(omega). At omega == omega_n exactly the two one-sided values at
 * +-1e-8 omega_diff are averaged (the real part diverges logarithmically there).
 */
inline std::complex<double> self_energy(double omega, const SelfEnergyParams& p) {
  p.validate();
  if (std::isnan(omega)) throw DomainError("self_energy: omega is NaN");
  const double nu = omega - p.omega_n;
  if (nu == 0.0) {
    const double d = 1e-8 * p.omega_diff;
    return 0.5 * (self_energy_detuned(-d, p) + self_energy_detuned(d, p));
  }
  return self_energy_detuned(nu, p);
}

/** d Sigma / d nu below threshold: g^2 (2x I1 K0 - 2(1 - 2 I1 K1)) / nu^2. */
inline double self_energy_slope_below(double nu, const SelfEnergyParams& p) {
  if (!(nu < 0.0)) throw DomainError("self_energy_slope_below: needs nu < 0");
  const double x = threshold_argument(nu, p.omega_diff);
  const double g2 = p.g * p.g;
  if (x < 1e-4) return -g2 * constants::pi * constants::pi / (4.0 * p.omega_diff * -nu);
  const double h = 1.0 - 2.0 * special::product_ik(1, 1, x);
  return g2 * (2.0 * x * special::product_ik(1, 0, x) - 2.0 * h) / (nu * nu);
}

/** Golden-rule decay 2 pi g^2 J1^2(x)/(omega0 - omega_n); zero at or below threshold. */
inline double perturbative_decay(double omega0, const SelfEnergyParams& p) {
  p.validate();
  const double nu = omega0 - p.omega_n;
  if (!(nu > 0.0)) return 0.0;
  const double x = threshold_argument(nu, p.omega_diff);
  const double j1 = special::bessel_kernel(x, BesselKind::J1);
  return constants::two_pi * p.g * p.g * j1 * j1 / nu;
}

/** Smooth envelope of perturbative_decay: J1^2 replaced by (J1^2 + Y1^2). */
inline double perturbative_decay_envelope(double omega0, const SelfEnergyParams& p) {
  p.validate();
  const double nu = omega0 - p.omega_n;
  if (!(nu > 0.0)) return 0.0;
  const double x = threshold_argument(nu, p.omega_diff);
  const double j1 = special::bessel_kernel(x, BesselKind::J1);
  const double y1 = special::bessel_kernel(x, BesselKind::Y1);
  return constants::two_pi * p.g * p.g * (j1 * j1 + y1 * y1) / nu;
}

/** Dressed frequencies (omega_plus, omega_minus) of the qubit and one standing wave. */
inline std::pair<double, double> dressed_poles(double omega0, double omega_n, double g) {
  const double mean = 0.5 * (omega0 + omega_n);
  const double half = 0.5 * (omega0 - omega_n);
  const double root = std::sqrt(g * g + half * half);
  return {mean + root, mean - root};
}

/** Vacuum Rabi frequency sqrt(4 g^2 + (omega0 - omega_n)^2). */
inline double rabi_frequency(double omega0, double omega_n, double g) {
  const double d = omega0 - omega_n;
  return std::sqrt(4.0 * g * g + d * d);
}

/** Early-time excited population 1 - (4g^2/Omega^2) sin^2(Omega t / 2). */
inline double rabi_population(double t, double omega0, double omega_n, double g) {
  const double omega = rabi_frequency(omega0, omega_n, g);
  if (omega == 0.0) return 1.0;
  const double s = std::sin(0.5 * omega * t);
  return 1.0 - 4.0 * g * g / (omega * omega) * s * s;
}

/** |Im Sigma(omega_n + g)|, the literal pole-shift decay of the upper dressed state. */
inline double rabi_decay_rate_at_pole(const SelfEnergyParams& p) {
  return std::abs(self_energy(p.omega_n + p.g, p).imag());
}

/**
 * Decay of resonant vacuum Rabi oscillations, pi g (J1^2 + Y1^2)(x) at
 * x = pi sqrt(g/omega_diff): the diffraction envelope of |Im Sigma(omega_+)|.
 * The literal pole value oscillates through zeros of J1 and is kept
 * separately as rabi_decay_rate_at_pole.
 */
inline double rabi_decay_rate(const SelfEnergyParams& p) {
  p.validate();
  const double x = threshold_argument(p.g, p.omega_diff);
  const double j1 = special::bessel_kernel(x, BesselKind::J1);
  const double y1 = special::bessel_kernel(x, BesselKind::Y1);
  return constants::pi * p.g * (j1 * j1 + y1 * y1);
}

/** True when the single-overtone approximation holds (g below a tenth of the free spectral range). */
inline bool single_overtone_valid(double g, double fsr) { return g <= 0.1 * fsr; }

}  // namespace phonoscope::dynamics
