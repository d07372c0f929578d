#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "phonoscope/core/parallel.hpp"
#include "phonoscope/dynamics/self_energy.hpp"

namespace phonoscope::dynamics {

enum class DynamicsMethod {
  kSpectral,      // bound-state pole + branch-cut density, Filon quadrature (default)
  kResolventGrid  // uniform trapezoid of the eta-regularized resolvent
};

enum class TraceTag { kClosedForm, kFourierInversion, kSpectral };

inline std::string tag_name(TraceTag t) {
  switch (t) {
    case TraceTag::kClosedForm: return "closed-form";
    case TraceTag::kFourierInversion: return "fourier-inversion";
    case TraceTag::kSpectral: return "spectral";
  }
  return "unknown";
}

struct DynamicsOptions {
  DynamicsMethod method = DynamicsMethod::kSpectral;
  double eta = 0.0;          // grid method: 0 means 1e-3 max(omega_diff, g)
  double grid_step = 0.0;    // grid method: 0 means min(omega_diff, g) / 20
  double tolerance = 1e-10;  // spectral method: area error allowed per interval
  double fsr = 0.0;          // free spectral range for the validity flag; 0 disables it
  unsigned threads = 1;
};

struct DynamicsTrace {
  std::vector<double> times;       // s
  std::vector<double> population;  // |A_e(t)|^2
  TraceTag method = TraceTag::kSpectral;
  double omega0 = 0.0;
  SelfEnergyParams params;
  double bound_state_weight = 0.0;  // residue of the sub-threshold pole (spectral method)
  double bound_state_detuning = 0.0;
  double spectral_weight = 0.0;     // pole residue + continuum integral, ideally 1
  std::size_t frequency_nodes = 0;
  bool single_overtone_warning = false;
};

/**
 * Spectral representation of the qubit amplitude: A(t) = Z e^{-i nu_b t} +
 * int_0^inf rho(nu) e^{-i nu t} d nu, with nu measured from omega_n. The
 * density rho = (-Im Sigma / pi) / ((nu - delta - Re Sigma)^2 + Im Sigma^2)
 * is tabulated on an adaptive grid and integrated exactly as a piecewise
 * linear function (Filon), so any t costs one pass over the grid.
 */
class SpectralResolvent {
 public:
  SpectralResolvent(double omega0, const SelfEnergyParams& p, double tolerance) : p_(p), tol_(tolerance) {
    p_.validate();
    if (!(tolerance > 0.0)) throw ValidationError("spectral dynamics: tolerance must be positive");
    delta_ = omega0 - p_.omega_n;
    find_bound_state();
    build_grid();
  }

  double bound_weight() const { return z_; }
  double bound_detuning() const { return nu_b_; }
  std::size_t nodes() const { return nu_.size(); }

  double continuum_weight() const {
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < nu_.size(); ++k) s += 0.5 * (rho_[k] + rho_[k + 1]) * (nu_[k + 1] - nu_[k]);
    return s;
  }

  /** Amplitude in the frame rotating at omega_n. */
  std::complex<double> amplitude(double t) const {
    std::complex<double> a = z_ * std::polar(1.0, -nu_b_ * t);
    std::complex<double> phase = std::polar(1.0, -nu_.front() * t);
    std::complex<double> acc = 0.0;
    for (std::size_t k = 0; k + 1 < nu_.size(); ++k) {
      const double h = nu_[k + 1] - nu_[k];
      const double theta = h * t;
      std::complex<double> w0, w1, step;
      filon_weights(theta, w0, w1, step);
      acc += phase * h * (rho_[k] * w0 + rho_[k + 1] * w1);
      phase *= step;
    }
    return a + acc;
  }

  double density(double nu) const { return rho(nu); }

 private:
  SelfEnergyParams p_;
  double tol_;
  double delta_ = 0.0;
  double z_ = 0.0;
  double nu_b_ = 0.0;
  std::vector<double> nu_;
  std::vector<double> rho_;

  // Weights of int_0^1 (1-u) e^{-i theta u} du and int_0^1 u e^{-i theta u} du, plus e^{-i theta}.
  static void filon_weights(double theta, std::complex<double>& w0, std::complex<double>& w1,
                            std::complex<double>& step) {
    const std::complex<double> c(0.0, -theta);
    step = std::polar(1.0, -theta);
    if (std::abs(theta) < 0.02) {
      std::complex<double> e = 0.0, u = 0.0, term = 1.0;
      for (int k = 0; k < 8; ++k) {
        e += term / static_cast<double>(k + 1);
        u += term / static_cast<double>(k + 2);
        term *= c / static_cast<double>(k + 1);
      }
      w1 = u;
      w0 = e - u;
      return;
    }
    const std::complex<double> e = (step - 1.0) / c;
    w1 = step / c - (step - 1.0) / (c * c);
    w0 = e - w1;
  }

  double rho(double nu) const {
    if (!(nu > 0.0)) return 0.0;
    const std::complex<double> s = self_energy_detuned(nu, p_);
    const double gamma = -s.imag();
    const double re = nu - delta_ - s.real();
    return (gamma / constants::pi) / (re * re + gamma * gamma);
  }

  double real_gap(double nu) const { return nu - delta_ - self_energy_detuned(nu, p_).real(); }

  // Sub-threshold root of nu - delta - Sigma(nu); monotone in nu, bisected in log(-nu).
  void find_bound_state() {
    auto f = [&](double u) {
      const double nu = -p_.omega_diff * std::exp(u);
      return nu - delta_ - self_energy_detuned(nu, p_).real();
    };
    double u_hi = std::log((std::abs(delta_) + p_.g + p_.omega_diff) / p_.omega_diff);
    while (f(u_hi) > 0.0) u_hi += 1.0;
    const double u_lo = -650.0;
    if (f(u_lo) <= 0.0) {  // pole closer to threshold than exp(-650) omega_diff: weight negligible
      z_ = 0.0;
      nu_b_ = 0.0;
      return;
    }
    double lo = u_lo, hi = u_hi;  // f(lo) > 0 > f(hi), f decreasing in u
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (f(mid) > 0.0) lo = mid;
      else hi = mid;
    }
    nu_b_ = -p_.omega_diff * std::exp(0.5 * (lo + hi));
    z_ = 1.0 / (1.0 - self_energy_slope_below(nu_b_, p_));
  }

  void build_grid() {
    const double wd = p_.omega_diff;
    const double g_rel = p_.g / wd;
    // Continuum tail beyond nu_max carries less than ~1e-10 of the weight.
    const double tail = std::pow(g_rel * g_rel / (2.5 * constants::pi * constants::pi * 1e-10), 0.4) * wd;
    const double nu_max = std::max(tail, 4.0 * (std::abs(delta_) + p_.g) + 200.0 * wd);

    std::vector<double> seeds;
    for (int k = -48; k <= 0; ++k) seeds.push_back(wd * std::pow(10.0, 0.25 * k));
    for (double nu = wd; nu < nu_max;) {
      nu += std::sqrt(std::max(nu, wd) * wd) / 8.0;
      seeds.push_back(std::min(nu, nu_max));
    }

    // Dense points around every zero of the real part of the resolvent denominator.
    std::vector<double> extra;
    for (std::size_t k = 0; k + 1 < seeds.size(); ++k) {
      const double a = seeds[k], b = seeds[k + 1];
      double fa = real_gap(a), fb = real_gap(b);
      if (fa == 0.0 || fa * fb > 0.0) continue;
      double lo = a, hi = b;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = real_gap(mid);
        if ((fm > 0.0) == (fa > 0.0)) {
          lo = mid;
          fa = fm;
        } else {
          hi = mid;
        }
      }
      const double root = 0.5 * (lo + hi);
      const double h = 1e-6 * std::max(root, wd);
      const double slope = std::abs((real_gap(root + h) - real_gap(std::max(root - h, 0.5 * root))) /
                                    (root + h - std::max(root - h, 0.5 * root)));
      const double width = std::max(-self_energy_detuned(root, p_).imag() / std::max(slope, 1e-300), 1e-14 * wd);
      extra.push_back(root);
      for (double s = 0.05; s < 1e4; s *= 1.25) {
        extra.push_back(root + s * width);
        if (root - s * width > 0.0) extra.push_back(root - s * width);
      }
    }
    seeds.insert(seeds.end(), extra.begin(), extra.end());
    seeds.push_back(0.0);
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    while (!seeds.empty() && seeds.back() > nu_max) seeds.pop_back();

    nu_.clear();
    rho_.clear();
    nu_.push_back(seeds.front());
    rho_.push_back(rho(seeds.front()));
    for (std::size_t k = 0; k + 1 < seeds.size(); ++k) refine(seeds[k], rho_.back(), seeds[k + 1], rho(seeds[k + 1]), 0);
    if (nu_.size() > 20000000) throw ConvergenceError("spectral dynamics: frequency grid exploded");
  }

  // Appends nodes of (a, b] so that linear interpolation of rho meets the area tolerance.
  void refine(double a, double ra, double b, double rb, int depth) {
    const double m = 0.5 * (a + b);
    const double rm = rho(m);
    const double err = std::abs(rm - 0.5 * (ra + rb)) * (b - a);
    if (err > tol_ && depth < 60 && (b - a) > 1e-13 * std::max(m, p_.omega_diff)) {
      refine(a, ra, m, rm, depth + 1);
      refine(m, rm, b, rb, depth + 1);
      return;
    }
    nu_.push_back(b);
    rho_.push_back(rb);
  }
};

inline std::vector<double> sample_times(double t_max, std::size_t samples) {
  if (!(t_max > 0.0)) throw ValidationError("full_dynamics: t_max must be positive");
  if (samples < 2) throw ValidationError("full_dynamics: need at least two samples");
  std::vector<double> t(samples);
  for (std::size_t k = 0; k < samples; ++k) t[k] = t_max * static_cast<double>(k) / static_cast<double>(samples - 1);
  return t;
}

namespace detail {

inline DynamicsTrace spectral_dynamics(double omega0, const SelfEnergyParams& p, double t_max, std::size_t samples,
                                       const DynamicsOptions& opt) {
  const SpectralResolvent r(omega0, p, opt.tolerance);
  DynamicsTrace trace;
  trace.times = sample_times(t_max, samples);
  trace.population = parallel_map(samples, opt.threads, [&](std::size_t k) { return std::norm(r.amplitude(trace.times[k])); });
  trace.method = TraceTag::kSpectral;
  trace.bound_state_weight = r.bound_weight();
  trace.bound_state_detuning = r.bound_detuning();
  trace.spectral_weight = r.bound_weight() + r.continuum_weight();
  trace.frequency_nodes = r.nodes();
  return trace;
}

inline DynamicsTrace grid_dynamics(double omega0, const SelfEnergyParams& p, double t_max, std::size_t samples,
                                   const DynamicsOptions& opt) {
  const double eta = opt.eta == 0.0 ? 1e-3 * std::max(p.omega_diff, p.g) : opt.eta;
  if (!(eta > 0.0)) throw ValidationError("full_dynamics: eta must be positive");
  const double max_step = std::min(p.omega_diff, p.g) / 20.0;
  const double h = opt.grid_step == 0.0 ? max_step : opt.grid_step;
  if (!(h > 0.0) || h > max_step * (1.0 + 1e-12)) {
    throw ValidationError("full_dynamics: frequency grid too coarse (step " + std::to_string(h) +
                          " rad/s exceeds min(omega_diff, g)/20 = " + std::to_string(max_step) + ")");
  }
  if (t_max > constants::pi / h) {
    throw ValidationError("full_dynamics: t_max exceeds the alias-free time pi/step of the frequency grid");
  }
  const double delta = omega0 - p.omega_n;
  const double span = 20.0 * std::max(p.g, p.omega_diff);
  const double lo = std::min(-20.0 * p.g, delta - span);
  const double hi = std::max(20.0 * p.g, delta + span);
  const std::size_t n = static_cast<std::size_t>(std::ceil((hi - lo) / h)) + 1;
  // Resolvent minus its bare part; the bare part is inverted analytically.
  std::vector<double> nu(n);
  std::vector<std::complex<double>> diff(n);
  for (std::size_t k = 0; k < n; ++k) {
    nu[k] = lo + h * static_cast<double>(k);
    const double x = nu[k] == 0.0 ? 0.5 * h : nu[k];  // threshold sampled half a step away
    const std::complex<double> z(x - delta, eta);
    const std::complex<double> sigma = self_energy_detuned(x, p);
    diff[k] = 1.0 / (z - sigma) - 1.0 / z;
    if (k == 0 || k + 1 == n) diff[k] *= 0.5;
  }
  DynamicsTrace trace;
  trace.times = sample_times(t_max, samples);
  trace.population = parallel_map(samples, opt.threads, [&](std::size_t j) {
    const double t = trace.times[j];
    std::complex<double> acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += diff[k] * std::polar(1.0, -nu[k] * t);
    const std::complex<double> a = std::polar(std::exp(-eta * t), -delta * t) +
                                   std::complex<double>(0.0, 1.0) * h / constants::two_pi * acc;
    return std::norm(a);
  });
  trace.method = TraceTag::kFourierInversion;
  trace.frequency_nodes = n;
  return trace;
}

}  // namespace detail

/** Excited-state population of the qubit coupled to one overtone's continuum, sampled on [0, t_max]. */
inline DynamicsTrace full_dynamics(double omega0, const SelfEnergyParams& p, double t_max, std::size_t samples,
                                   const DynamicsOptions& opt = {}) {
  p.validate();
  if (!(omega0 > 0.0)) throw ValidationError("full_dynamics: omega0 must be positive");
  DynamicsTrace trace = opt.method == DynamicsMethod::kSpectral ? detail::spectral_dynamics(omega0, p, t_max, samples, opt)
                                                                : detail::grid_dynamics(omega0, p, t_max, samples, opt);
  trace.omega0 = omega0;
  trace.params = p;
  trace.single_overtone_warning = opt.fsr > 0.0 && !single_overtone_valid(p.g, opt.fsr);
  return trace;
}

/** Closed-form early-time trace (no decay), tagged closed-form. */
inline DynamicsTrace closed_form_dynamics(double omega0, const SelfEnergyParams& p, double t_max, std::size_t samples) {
  p.validate();
  DynamicsTrace trace;
  trace.times = sample_times(t_max, samples);
  trace.population.reserve(samples);
  for (double t : trace.times) trace.population.push_back(rabi_population(t, omega0, p.omega_n, p.g));
  trace.method = TraceTag::kClosedForm;
  trace.omega0 = omega0;
  trace.params = p;
  return trace;
}

}  // namespace phonoscope::dynamics
