#pragma once

#include <cmath>
#include <vector>

#include "phonoscope/core/constants.hpp"
#include "phonoscope/core/error.hpp"

namespace phonoscope::spectroscopy {

/** chi = 2 g^2 / Delta (rad/s); sign follows Delta. */
inline double dispersive_shift(double g, double delta) {
  if (delta == 0.0 || std::isnan(delta)) throw DomainError("dispersive_shift: detuning must be non-zero");
  return 2.0 * g * g / delta;
}

/** The dispersive expansion needs |Delta| > 3 g. */
inline bool dispersive_regime(double g, double delta) { return std::abs(delta) > 3.0 * std::abs(g); }

/** Qubit linewidth with N phonons: 2 gamma2 + N kappa. */
inline double linewidth(int n, double gamma2, double kappa) {
  if (n < 0) throw ValidationError("linewidth: phonon number must be non-negative");
  return 2.0 * gamma2 + n * kappa;
}

/** Single-phonon cooperativity 4 g^2 / (kappa gamma2). */
inline double cooperativity(double g, double kappa, double gamma2) {
  if (!(kappa > 0.0) || !(gamma2 > 0.0)) throw ValidationError("cooperativity: kappa and gamma2 must be positive");
  return 4.0 * g * g / (kappa * gamma2);
}

/** Poisson weights P(N; nbar) for N = 0..n_max, computed by recursion. */
inline std::vector<double> poisson_weights(double nbar, int n_max) {
  std::vector<double> w(static_cast<std::size_t>(n_max) + 1);
  w[0] = std::exp(-nbar);
  for (int n = 1; n <= n_max; ++n) w[static_cast<std::size_t>(n)] = w[static_cast<std::size_t>(n - 1)] * nbar / n;
  return w;
}

/** Smallest Fock cutoff meeting both the ceil(nbar + 5 sqrt(nbar)) rule and a tail mass below `tail`. */
inline int required_cutoff(double nbar, double tail = 1e-6) {
  int n = static_cast<int>(std::ceil(nbar + 5.0 * std::sqrt(nbar)));
  for (;; ++n) {
    const auto w = poisson_weights(nbar, n);
    double s = 0.0;
    for (double v : w) s += v;
    if (1.0 - s < tail) return n;
    if (n > 100000) throw ValidationError("required_cutoff: nbar too large");
  }
}

/** Unit-area Lorentzian with full width gamma centred on c. */
inline double lorentzian(double omega, double centre, double gamma) {
  const double d = omega - centre;
  const double hw = 0.5 * gamma;
  return (hw / constants::pi) / (d * d + hw * hw);
}

/**
 * Dispersive spectroscopy model: Poisson-weighted Lorentzians at
 * omega_tilde0 + N chi with widths 2 gamma2 + N kappa, scaled by
 * `amplitude` and lifted by `baseline`.
 */
struct DispersiveModel {
  double omega_tilde0 = 0.0;
  double chi = 0.0;
  double gamma2 = 0.0;
  double kappa = 0.0;
  double nbar = 0.0;
  int n_max = 0;
  double amplitude = 1.0;
  double baseline = 0.0;

  void validate() const {
    if (!(gamma2 > 0.0)) throw ValidationError("dispersive model: gamma2 must be positive");
    if (!(kappa >= 0.0)) throw ValidationError("dispersive model: kappa must be non-negative");
    if (!(nbar >= 0.0)) throw ValidationError("dispersive model: nbar must be non-negative");
    if (n_max < static_cast<int>(std::ceil(nbar + 5.0 * std::sqrt(nbar)))) {
      throw ValidationError("dispersive model: n_max below ceil(nbar + 5 sqrt(nbar))");
    }
    const auto w = poisson_weights(nbar, n_max);
    double s = 0.0;
    for (double v : w) s += v;
    if (1.0 - s > 1e-6) throw ValidationError("dispersive model: Poisson tail beyond n_max exceeds 1e-6; raise n_max");
  }
};

inline std::vector<double> spectrum_model(const DispersiveModel& model, const std::vector<double>& omega) {
  model.validate();
  const auto w = poisson_weights(model.nbar, model.n_max);
  std::vector<double> out(omega.size(), 0.0);
  for (int n = 0; n <= model.n_max; ++n) {
    const double weight = w[static_cast<std::size_t>(n)];
    if (weight == 0.0) continue;
    const double centre = model.omega_tilde0 + n * model.chi;
    const double gamma = linewidth(n, model.gamma2, model.kappa);
    for (std::size_t k = 0; k < omega.size(); ++k) out[k] += weight * lorentzian(omega[k], centre, gamma);
  }
  for (double& v : out) v = model.amplitude * v + model.baseline;
  return out;
}

}  // namespace phonoscope::spectroscopy
