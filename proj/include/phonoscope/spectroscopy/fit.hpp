#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "phonoscope/spectroscopy/dispersive.hpp"

namespace phonoscope::spectroscopy {

struct SpectrumData {
  std::vector<double> omega;      // rad/s
  std::vector<double> intensity;  // arbitrary units
};

/** Best-fit dispersive model with one-sigma uncertainties (rad/s, except nbar). */
struct FitResult {
  DispersiveModel model;
  double sigma_omega_tilde0 = 0.0;
  double sigma_gamma2 = 0.0;
  double sigma_kappa = 0.0;
  double sigma_nbar = 0.0;
  double sigma_amplitude = 0.0;
  double sigma_baseline = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
  std::vector<double> cost_history;  // 0.5 |r|^2 after every accepted step
};

struct FitOptions {
  int max_iterations = 200;
  double step_tolerance = 1e-10;
};

namespace detail {

inline constexpr int kParams = 6;  // omega_tilde0, gamma2, kappa, nbar, amplitude, baseline
using ParamVec = std::array<double, kParams>;

// Internal scaled variables: frequencies in units of |chi| about omega_ref, intensities in units of y_scale.
struct Scaling {
  double omega_ref = 0.0;
  double s = 1.0;
  double y = 1.0;
};

inline ParamVec to_internal(const DispersiveModel& m, const Scaling& sc) {
  return {(m.omega_tilde0 - sc.omega_ref) / sc.s, m.gamma2 / sc.s, m.kappa / sc.s, m.nbar, m.amplitude / (sc.y * sc.s),
          m.baseline / sc.y};
}

inline DispersiveModel to_model(const ParamVec& p, double chi, const Scaling& sc) {
  DispersiveModel m;
  m.omega_tilde0 = sc.omega_ref + p[0] * sc.s;
  m.chi = chi;
  m.gamma2 = p[1] * sc.s;
  m.kappa = p[2] * sc.s;
  m.nbar = p[3];
  m.n_max = required_cutoff(p[3], 1e-9);
  m.amplitude = p[4] * sc.y * sc.s;
  m.baseline = p[5] * sc.y;
  return m;
}

// Residuals and Jacobian in scaled variables; x holds scaled frequencies, chi scaled too.
inline void evaluate(const ParamVec& p, double chi, const std::vector<double>& x, const std::vector<double>& y,
                     std::vector<double>& r, std::vector<std::array<double, kParams>>* jac) {
  const int n_max = required_cutoff(p[3], 1e-9);
  const auto w = poisson_weights(p[3], n_max);
  const std::size_t m = x.size();
  r.assign(m, 0.0);
  if (jac) jac->assign(m, std::array<double, kParams>{});
  std::vector<double> shape(m, 0.0);
  for (int n = 0; n <= n_max; ++n) {
    const double pn = w[static_cast<std::size_t>(n)];
    const double dpn = pn * (n / std::max(p[3], 1e-300)) - pn;  // d P_N / d nbar = P_{N-1} - P_N
    const double dpn_safe = p[3] > 0.0 ? dpn : (n == 0 ? -1.0 : (n == 1 ? 1.0 : 0.0));
    const double centre = p[0] + n * chi;
    const double gamma = 2.0 * p[1] + n * p[2];
    const double hw = 0.5 * gamma;
    for (std::size_t k = 0; k < m; ++k) {
      const double d = x[k] - centre;
      const double den = d * d + hw * hw;
      const double l = (hw / constants::pi) / den;
      shape[k] += pn * l;
      if (jac) {
        auto& row = (*jac)[k];
        const double dl_dc = (hw / constants::pi) * 2.0 * d / (den * den);
        const double dl_dgamma = (0.5 / constants::pi) * (d * d - hw * hw) / (den * den);
        row[0] += p[4] * pn * dl_dc;
        row[1] += p[4] * pn * dl_dgamma * 2.0;
        row[2] += p[4] * pn * dl_dgamma * n;
        row[3] += p[4] * dpn_safe * l;
      }
    }
  }
  for (std::size_t k = 0; k < m; ++k) {
    r[k] = p[4] * shape[k] + p[5] - y[k];
    if (jac) {
      (*jac)[k][4] = shape[k];
      (*jac)[k][5] = 1.0;
    }
  }
}

inline double half_sum_squares(const std::vector<double>& r) {
  double s = 0.0;
  for (double v : r) s += v * v;
  return 0.5 * s;
}

// Solves a (symmetric positive definite) system by Gaussian elimination with partial pivoting.
inline bool solve(std::array<std::array<double, kParams>, kParams> a, ParamVec b, ParamVec& x) {
  for (int c = 0; c < kParams; ++c) {
    int piv = c;
    for (int i = c + 1; i < kParams; ++i)
      if (std::abs(a[i][c]) > std::abs(a[piv][c])) piv = i;
    if (!(std::abs(a[piv][c]) > 0.0) || !std::isfinite(a[piv][c])) return false;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (int i = c + 1; i < kParams; ++i) {
      const double f = a[i][c] / a[c][c];
      for (int j = c; j < kParams; ++j) a[i][j] -= f * a[c][j];
      b[i] -= f * b[c];
    }
  }
  for (int i = kParams - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < kParams; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return true;
}

inline void project(ParamVec& p) {
  p[1] = std::max(p[1], 1e-9);  // gamma2 > 0
  p[2] = std::max(p[2], 0.0);   // kappa >= 0
  p[3] = std::max(p[3], 0.0);   // nbar >= 0
}

}  // namespace detail

/** Data checks shared by the fit and the initial-guess estimator. */
inline void check_fit_data(const SpectrumData& data, double chi) {
  if (data.omega.size() != data.intensity.size()) throw ValidationError("fit: frequency and intensity sizes differ");
  if (data.omega.size() < 50) throw ValidationError("fit: need at least 50 samples");
  if (!(chi != 0.0) || !std::isfinite(chi)) throw ValidationError("fit: chi must be non-zero");
  for (std::size_t k = 0; k < data.omega.size(); ++k)
    if (!std::isfinite(data.omega[k]) || !std::isfinite(data.intensity[k])) throw ValidationError("fit: non-finite sample");
  const auto [lo, hi] = std::minmax_element(data.omega.begin(), data.omega.end());
  if (*hi - *lo < 4.0 * std::abs(chi)) throw ValidationError("fit: samples must span at least 4|chi|");
}

/**
 * Initial guess from the data: the N = 0 line is the outermost significant
 * peak on the side opposite to chi; nbar comes from the height ratio of the
 * two tallest peaks unless `nbar_guess` is non-negative.
 */
inline DispersiveModel estimate_initial(const SpectrumData& data, double chi, double gamma2, double kappa,
                                        double nbar_guess = -1.0) {
  check_fit_data(data, chi);
  const std::size_t m = data.omega.size();
  std::vector<std::size_t> order(m);
  for (std::size_t k = 0; k < m; ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return data.omega[a] < data.omega[b]; });
  std::vector<double> f(m), y(m);
  for (std::size_t k = 0; k < m; ++k) {
    f[k] = data.omega[order[k]];
    y[k] = data.intensity[order[k]];
  }
  std::vector<double> smooth(y);
  for (std::size_t k = 1; k + 1 < m; ++k) smooth[k] = (y[k - 1] + y[k] + y[k + 1]) / 3.0;
  const double base = *std::min_element(smooth.begin(), smooth.end());
  const double top = *std::max_element(smooth.begin(), smooth.end());
  struct Peak {
    double omega, height;
  };
  std::vector<Peak> peaks;
  for (std::size_t k = 1; k + 1 < m; ++k) {
    if (smooth[k] >= smooth[k - 1] && smooth[k] > smooth[k + 1] && smooth[k] - base > 0.1 * (top - base)) {
      if (!peaks.empty() && std::abs(f[k] - peaks.back().omega) < 0.5 * std::abs(chi)) {
        if (smooth[k] - base > peaks.back().height) peaks.back() = {f[k], smooth[k] - base};
        continue;
      }
      peaks.push_back({f[k], smooth[k] - base});
    }
  }
  if (peaks.empty()) throw ConvergenceError("fit: no peaks found in the data");
  // N = 0 sits at the high-frequency end when chi < 0, the low end otherwise.
  const Peak zero = chi < 0.0 ? peaks.back() : peaks.front();

  DispersiveModel init;
  init.omega_tilde0 = zero.omega;
  init.chi = chi;
  init.gamma2 = gamma2;
  init.kappa = kappa;
  init.baseline = base;

  double nbar = nbar_guess;
  if (!(nbar >= 0.0)) {
    std::vector<Peak> tallest = peaks;
    std::sort(tallest.begin(), tallest.end(), [](const Peak& a, const Peak& b) { return a.height > b.height; });
    nbar = 0.0;
    if (tallest.size() >= 2) {
      const int na = static_cast<int>(std::lround((tallest[0].omega - zero.omega) / chi));
      const int nb = static_cast<int>(std::lround((tallest[1].omega - zero.omega) / chi));
      if (std::abs(na - nb) == 1) {
        const Peak& lo = na < nb ? tallest[0] : tallest[1];
        const Peak& hi = na < nb ? tallest[1] : tallest[0];
        const int n_hi = std::max(na, nb);
        // peak height ~ P(N) * 2/(pi gamma(N)), P(N)/P(N-1) = nbar/N
        nbar = (hi.height / lo.height) * n_hi * linewidth(n_hi, gamma2, kappa) / linewidth(n_hi - 1, gamma2, kappa);
      }
    }
  }
  init.nbar = nbar;
  init.n_max = required_cutoff(nbar);
  const double p0 = std::exp(-nbar);
  init.amplitude = zero.height * constants::pi * linewidth(0, gamma2, kappa) / (2.0 * std::max(p0, 1e-6));
  return init;
}

/**
 * Levenberg-Marquardt fit of (omega_tilde0, gamma2, kappa, nbar, amplitude,
 * baseline) with chi held fixed. Accepted steps never increase the cost.
 * Converges when the relative step falls below the tolerance; throws
 * ConvergenceError at the iteration cap or for a degenerate Jacobian.
 */
inline FitResult fit_spectrum(const SpectrumData& data, double chi, const DispersiveModel& initial,
                              const FitOptions& opt = {}) {
  check_fit_data(data, chi);
  if (!(initial.gamma2 > 0.0) || !(initial.kappa >= 0.0) || !(initial.nbar >= 0.0)) {
    throw ValidationError("fit: initial gamma2 > 0, kappa >= 0, nbar >= 0 required");
  }
  detail::Scaling sc;
  sc.omega_ref = initial.omega_tilde0;
  sc.s = std::abs(chi);
  double ymax = 0.0;
  for (double v : data.intensity) ymax = std::max(ymax, std::abs(v));
  sc.y = ymax > 0.0 ? ymax : 1.0;

  std::vector<double> x(data.omega.size()), y(data.omega.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    x[k] = (data.omega[k] - sc.omega_ref) / sc.s;
    y[k] = data.intensity[k] / sc.y;
  }
  const double chi_s = chi / sc.s;
  detail::ParamVec p = detail::to_internal(initial, sc);
  detail::project(p);

  std::vector<double> r;
  std::vector<std::array<double, detail::kParams>> jac;
  detail::evaluate(p, chi_s, x, y, r, &jac);
  double cost = detail::half_sum_squares(r);
  FitResult result;
  result.cost_history.push_back(cost * sc.y * sc.y);
  double lambda = 1e-3;
  bool converged = false;
  int it = 0;
  std::array<std::array<double, detail::kParams>, detail::kParams> jtj{};
  for (; it < opt.max_iterations && !converged; ++it) {
    detail::ParamVec grad{};
    for (auto& row : jtj) row.fill(0.0);
    for (std::size_t k = 0; k < r.size(); ++k)
      for (int i = 0; i < detail::kParams; ++i) {
        grad[i] += jac[k][i] * r[k];
        for (int j = 0; j < detail::kParams; ++j) jtj[i][j] += jac[k][i] * jac[k][j];
      }
    for (int i = 0; i < detail::kParams; ++i)
      if (!(jtj[i][i] > 0.0)) throw ConvergenceError("fit: degenerate Jacobian (parameter has no effect on the model)");

    while (true) {
      auto a = jtj;
      for (int i = 0; i < detail::kParams; ++i) a[i][i] *= 1.0 + lambda;
      detail::ParamVec neg_grad{};
      for (int i = 0; i < detail::kParams; ++i) neg_grad[i] = -grad[i];
      detail::ParamVec step{};
      if (!detail::solve(a, neg_grad, step)) throw ConvergenceError("fit: degenerate Jacobian");
      detail::ParamVec trial = p;
      for (int i = 0; i < detail::kParams; ++i) trial[i] += step[i];
      detail::project(trial);
      double step_norm = 0.0, param_norm = 0.0;
      for (int i = 0; i < detail::kParams; ++i) {
        step_norm += (trial[i] - p[i]) * (trial[i] - p[i]);
        param_norm += p[i] * p[i];
      }
      if (std::sqrt(step_norm) <= opt.step_tolerance * (std::sqrt(param_norm) + opt.step_tolerance)) {
        converged = true;
        break;
      }
      std::vector<double> r_trial;
      detail::evaluate(trial, chi_s, x, y, r_trial, nullptr);
      const double cost_trial = detail::half_sum_squares(r_trial);
      if (cost_trial < cost) {
        p = trial;
        cost = cost_trial;
        lambda = std::max(lambda / 3.0, 1e-12);
        detail::evaluate(p, chi_s, x, y, r, &jac);
        result.cost_history.push_back(cost * sc.y * sc.y);
        break;
      }
      lambda *= 4.0;
      if (lambda > 1e16) {  // no descent direction left at working precision
        converged = true;
        break;
      }
    }
  }
  if (!converged) throw ConvergenceError("fit: no convergence within " + std::to_string(opt.max_iterations) + " iterations");

  result.model = detail::to_model(p, chi, sc);
  result.iterations = it;
  result.residual_norm = std::sqrt(2.0 * cost) * sc.y;

  // Covariance s^2 (J^T J)^-1 from the final Jacobian, mapped back to physical units.
  for (auto& row : jtj) row.fill(0.0);
  for (std::size_t k = 0; k < r.size(); ++k)
    for (int i = 0; i < detail::kParams; ++i)
      for (int j = 0; j < detail::kParams; ++j) jtj[i][j] += jac[k][i] * jac[k][j];
  const double dof = static_cast<double>(r.size()) - detail::kParams;
  const double s2 = dof > 0 ? 2.0 * cost / dof : 0.0;
  std::array<double, detail::kParams> var{};
  for (int i = 0; i < detail::kParams; ++i) {
    detail::ParamVec e{};
    e[i] = 1.0;
    detail::ParamVec col{};
    if (!detail::solve(jtj, e, col)) throw ConvergenceError("fit: singular normal matrix at the solution");
    var[i] = std::max(col[i] * s2, 0.0);
  }
  result.sigma_omega_tilde0 = std::sqrt(var[0]) * sc.s;
  result.sigma_gamma2 = std::sqrt(var[1]) * sc.s;
  result.sigma_kappa = std::sqrt(var[2]) * sc.s;
  result.sigma_nbar = std::sqrt(var[3]);
  result.sigma_amplitude = std::sqrt(var[4]) * sc.y * sc.s;
  result.sigma_baseline = std::sqrt(var[5]) * sc.y;
  return result;
}

}  // namespace phonoscope::spectroscopy
