#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "phonoscope/boundstates/spectra.hpp"
#include "phonoscope/cli/config.hpp"
#include "phonoscope/cli/output.hpp"
#include "phonoscope/core/parallel.hpp"
#include "phonoscope/dynamics/full_dynamics.hpp"
#include "phonoscope/dynamics/self_energy.hpp"
#include "phonoscope/elastodynamics/christoffel.hpp"
#include "phonoscope/elastodynamics/splitting.hpp"
#include "phonoscope/emission/coupling.hpp"
#include "phonoscope/emission/rates.hpp"
#include "phonoscope/spectroscopy/fit.hpp"

namespace phonoscope::cli {

inline unsigned default_threads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n ? n : 1;
}

inline constexpr double kGHz = constants::two_pi * 1e9;
inline constexpr double kMHz = constants::two_pi * 1e6;
inline constexpr double kKHz = constants::two_pi * 1e3;
inline constexpr double kDeg = constants::pi / 180.0;

/** Options shared by every subcommand. Thread count never reaches the output. */
struct CommonOptions {
  std::string out;
  std::string config;
  std::string field_map_dir;
  unsigned threads = default_threads();
};

inline DeviceConfig device_from(const CommonOptions& c) {
  DeviceConfig cfg = c.config.empty() ? default_config() : load_config(c.config);
  if (!c.field_map_dir.empty()) {
    cfg.field.kind = FieldSource::Kind::kGrid;
    cfg.field.dir = c.field_map_dir;
  }
  return cfg;
}

/** n evenly spaced points on [lo, hi]; a single point sits at lo. */
inline std::vector<double> linspace(const std::vector<double>& range, std::size_t n, const std::string& what) {
  if (range.size() != 2) throw ValidationError(what + ": range needs two values lo,hi");
  const double lo = range[0], hi = range[1];
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi >= lo)) throw ValidationError(what + ": need lo <= hi");
  if (n == 0) throw ValidationError(what + ": need at least one point");
  if (n > 1 && !(hi > lo)) throw ValidationError(what + ": several points need lo < hi");
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  return out;
}

inline std::string range_text(const std::vector<double>& r) { return fmt(r.at(0)) + "," + fmt(r.at(1)); }

inline void describe_device(CsvWriter& csv, const DeviceConfig& cfg, const emission::AcousticMedium& med) {
  csv.param("substrate", cfg.substrate);
  csv.param("film", cfg.film);
  csv.param("geometry", cfg.geometry_name);
  csv.param("b_m", cfg.geometry.b);
  csv.param("b_p_m", cfg.geometry.b_p);
  csv.param("a_m", cfg.geometry.a);
  if (const auto* d = std::get_if<emission::Dome>(&cfg.geometry.transducer)) {
    csv.param("transducer", "dome(z0=" + fmt(d->z0) + ", r=" + fmt(d->r) + ")");
  } else if (const auto* c = std::get_if<emission::Cylinder>(&cfg.geometry.transducer)) {
    csv.param("transducer", "cylinder(z0=" + fmt(c->z0) + ", r=" + fmt(c->r) + ")");
  } else {
    csv.param("transducer", "flat");
  }
  csv.param("field", field_description(cfg));
  csv.param("rho_kg_m3", med.rho);
  csv.param("v_l_m_s", med.v_l);
  csv.param("v_sh_m_s", med.v_sh);
  csv.param("v_perp_m_s", med.v_perp);
  csv.param("e33_C_m2", med.e33);
  csv.param("e15_C_m2", med.e15);
}

// ---------------------------------------------------------------- materials

struct MaterialsOptions {
  std::string preset = "sapphire";
};

inline nlohmann::json matrix_json(const materials::Stiffness& c, double scale) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < 6; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < 6; ++j) row.push_back(c(i, j) * scale);
    rows.push_back(row);
  }
  return rows;
}

inline std::string run_materials(const MaterialsOptions& o, const CommonOptions&) {
  const auto mat = resolve_material(o.preset);
  mat.validate();
  nlohmann::json j;
  j["name"] = mat.name;
  j["rho_kg_m3"] = mat.rho;
  j["c_GPa"] = matrix_json(mat.c, 1e-9);
  const auto v = materials::axis_velocities(mat);
  j["velocities_km_s"] = {{"v_l", v.v_l * 1e-3}, {"v_sh", v.v_sh * 1e-3}, {"v_perp", v.v_perp * 1e-3}};
  if (mat.is_piezoelectric()) {
    const auto e = materials::piezo_stress_form(mat);
    j["e_C_m2"] = {{"e33", e(2, 2)}, {"e31", e(2, 0)}, {"e15", e(0, 4)}};
    if (mat.eps) {
      const auto cd = materials::effective_stiffness(mat);
      j["stiffened_c_GPa"] = matrix_json(cd, 1e-9);
      const auto vd = materials::axis_velocities(cd, mat.rho);
      j["stiffened_velocities_km_s"] = {{"v_l", vd.v_l * 1e-3}, {"v_sh", vd.v_sh * 1e-3}};
    }
  }
  return json_text(j);
}

// --------------------------------------------------------- velocity-surface

struct VelocitySurfaceOptions {
  std::string material = "sapphire";
  double phi_deg = 0.0;
  std::vector<double> theta_deg_range{0.0, 180.0};
  std::size_t samples = 181;
};

inline std::string run_velocity_surface(const VelocitySurfaceOptions& o, const CommonOptions& c) {
  const auto mat = resolve_material(o.material);
  mat.validate();
  if (o.theta_deg_range.size() != 2) throw ValidationError("velocity-surface: theta range needs two values");
  const auto surface = elastodynamics::velocity_surface(mat, o.phi_deg * kDeg, o.samples, o.theta_deg_range[0] * kDeg,
                                                        o.theta_deg_range[1] * kDeg, c.threads);
  CsvWriter csv("velocity-surface", {"theta_deg", "v1_kms", "v2_kms", "v3_kms"});
  csv.param("material", mat.name);
  csv.param("phi_deg", o.phi_deg);
  csv.param("theta_deg_range", range_text(o.theta_deg_range));
  csv.param("samples", o.samples);
  for (const auto& s : surface) {
    csv.row({fmt(s.theta / kDeg), fmt(s.branches.velocity[0] * 1e-3), fmt(s.branches.velocity[1] * 1e-3),
             fmt(s.branches.velocity[2] * 1e-3)});
  }
  return csv.str();
}

// ---------------------------------------------------------------- emit-rate

struct EmitRateOptions {
  std::string material;  // substrate preset, config value when empty
  std::string film;
  std::string geometry;
  std::vector<double> freq_ghz_range{4.0, 8.0};
  std::size_t points = 101;
  std::optional<double> e33;
  std::optional<double> e15;
};

inline void apply_device_flags(DeviceConfig& cfg, const std::string& material, const std::string& film,
                               const std::string& geometry, std::optional<double> e33, std::optional<double> e15) {
  if (!material.empty()) cfg.substrate = material;
  if (!film.empty()) cfg.film = film;
  if (!geometry.empty()) {
    cfg.geometry_name = geometry;
    cfg.geometry = builtin_geometry(geometry);
  }
  if (e33) {
    if (!(*e33 > 0.0)) throw ValidationError("--e33 must be positive");
    cfg.overrides.e33 = e33;
  }
  if (e15) cfg.overrides.e15 = e15;
}

inline std::string run_emit_rate(const EmitRateOptions& o, const CommonOptions& c) {
  DeviceConfig cfg = device_from(c);
  apply_device_flags(cfg, o.material, o.film, o.geometry, o.e33, o.e15);
  const auto med = resolve_medium(cfg);
  const auto field = resolve_field(cfg);
  const double ex2 = field_integral_or_zero(field, fields::Component::X);
  const double ey2 = field_integral_or_zero(field, fields::Component::Y);
  const double ez2 = field_integral_or_zero(field, fields::Component::Z);
  const auto freqs = linspace(o.freq_ghz_range, o.points, "emit-rate");
  if (!(freqs.front() > 0.0)) throw ValidationError("emit-rate: frequencies must be positive");
  const auto rates = parallel_map(freqs.size(), c.threads, [&](std::size_t k) {
    return emission::total_free_space_rate(med, cfg.geometry, freqs[k] * kGHz, ex2, ey2, ez2);
  });
  CsvWriter csv("emit-rate", {"freq_GHz", "gamma_l_Hz", "gamma_sh_x_Hz", "gamma_sh_y_Hz", "gamma_total_Hz"});
  describe_device(csv, cfg, med);
  csv.param("int_Ex2_V2", ex2);
  csv.param("int_Ey2_V2", ey2);
  csv.param("int_Ez2_V2", ez2);
  csv.param("freq_ghz_range", range_text(o.freq_ghz_range));
  csv.param("points", o.points);
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    const auto& r = rates[k];
    csv.row({fmt(freqs[k]), fmt(r.longitudinal / constants::two_pi), fmt(r.shear_x / constants::two_pi),
             fmt(r.shear_y / constants::two_pi), fmt(r.total() / constants::two_pi)});
  }
  return csv.str();
}

// ------------------------------------------------------------ decay-spectrum

struct DecaySpectrumOptions {
  std::string material;
  std::string film;
  std::string geometry;
  std::vector<double> freq_ghz_range{5.8, 6.0};
  std::size_t points = 4001;
  std::optional<double> e33;
  std::optional<double> e15;
  bool shear = false;
  double tilt_deg = 0.0;
  int overtone_window = 200;
};

namespace detail {

/** One ladder of standing waves: frequency of overtone n is offset + n * fsr. */
struct Ladder {
  emission::AcousticMedium medium;  // v_l and e33 slots hold the ladder's velocity and piezo constant
  double field_rms = 0.0;
  double offset = 0.0;
};

inline double ladder_rate(const Ladder& lad, const emission::DeviceGeometry& geom, double omega0, int window,
                          double splitting_per_omega) {
  const double fsr = constants::pi * lad.medium.v_l / geom.b;
  const int n_top = static_cast<int>(std::floor(omega0 / fsr)) + 1;
  double total = 0.0;
  for (int n = n_top; n >= 1 && n > n_top - window; --n) {
    const auto cr = emission::standing_wave_coupling(lad.medium, geom, n, lad.field_rms, geom.a);
    const double omega_n = cr.omega * (1.0 + lad.offset * splitting_per_omega);
    if (!(omega_n < omega0)) continue;
    dynamics::SelfEnergyParams p{cr.g, omega_n, emission::diffraction_scale(geom, lad.medium, omega_n)};
    total += dynamics::perturbative_decay(omega0, p);
  }
  return total;
}

}  // namespace detail

inline std::string run_decay_spectrum(const DecaySpectrumOptions& o, const CommonOptions& c) {
  DeviceConfig cfg = device_from(c);
  apply_device_flags(cfg, o.material, o.film, o.geometry, o.e33, o.e15);
  if (o.overtone_window < 1) throw ValidationError("decay-spectrum: overtone window must be at least 1");
  const auto med = resolve_medium(cfg);
  const auto field = resolve_field(cfg);
  const double a = cfg.geometry.a;
  const double area = constants::pi * a * a;

  std::vector<detail::Ladder> ladders;
  ladders.push_back({med, std::sqrt(field_integral_or_zero(field, fields::Component::Z) / area), 0.0});
  double split_ratio = 0.0;
  if (o.shear) {
    emission::AcousticMedium sm = med;
    sm.v_l = med.v_sh;
    sm.v_perp = med.v_sh;
    sm.e33 = std::abs(med.e15);
    if (o.tilt_deg != 0.0) {
      const auto substrate = resolve_material(cfg.substrate);
      split_ratio = elastodynamics::shear_splitting(substrate, 1.0, o.tilt_deg * kDeg);
    }
    ladders.push_back({sm, std::sqrt(field_integral_or_zero(field, fields::Component::X) / area), +0.5});
    ladders.push_back({sm, std::sqrt(field_integral_or_zero(field, fields::Component::Y) / area), -0.5});
  } else if (o.tilt_deg != 0.0) {
    throw ValidationError("decay-spectrum: --tilt-deg needs --shear");
  }

  const auto freqs = linspace(o.freq_ghz_range, o.points, "decay-spectrum");
  if (!(freqs.front() > 0.0)) throw ValidationError("decay-spectrum: frequencies must be positive");
  const auto gamma = parallel_map(freqs.size(), c.threads, [&](std::size_t k) {
    double total = 0.0;
    for (const auto& lad : ladders) {
      if (lad.field_rms == 0.0) continue;
      total += detail::ladder_rate(lad, cfg.geometry, freqs[k] * kGHz, o.overtone_window, split_ratio);
    }
    return total;
  });

  CsvWriter csv("decay-spectrum", {"freq_GHz", "gamma_Hz"});
  describe_device(csv, cfg, med);
  csv.param("freq_ghz_range", range_text(o.freq_ghz_range));
  csv.param("points", o.points);
  csv.param("shear", o.shear ? "on" : "off");
  csv.param("tilt_deg", o.tilt_deg);
  csv.param("overtone_window", o.overtone_window);
  csv.param("fsr_longitudinal_MHz", med.v_l / (2.0 * cfg.geometry.b) * 1e-6);
  if (o.shear) csv.param("fsr_shear_MHz", med.v_sh / (2.0 * cfg.geometry.b) * 1e-6);
  for (std::size_t k = 0; k < freqs.size(); ++k) csv.row({fmt(freqs[k]), fmt(gamma[k] / constants::two_pi)});
  return csv.str();
}

// ------------------------------------------------------------------ dynamics

struct DynamicsCliOptions {
  std::optional<double> omega0_ghz;
  std::optional<double> omega_n_ghz;
  std::optional<double> g_mhz;
  std::optional<double> omega_diff_khz;
  double tmax_us = 10.0;
  std::size_t samples = 1001;
  std::string method = "spectral";
  std::vector<double> omega0_ghz_range;  // sweep mode when set
  std::size_t points = 21;
  std::string out_dir;
};

namespace detail {

struct ResolvedDynamics {
  dynamics::SelfEnergyParams params;
  double fsr = 0.0;
  int overtone = 0;
};

inline ResolvedDynamics resolve_dynamics(const DynamicsCliOptions& o, const DeviceConfig& cfg,
                                         const emission::AcousticMedium& med, double omega0) {
  ResolvedDynamics r;
  r.fsr = constants::pi * med.v_l / cfg.geometry.b;
  double omega_n = 0.0;
  if (o.omega_n_ghz) {
    omega_n = *o.omega_n_ghz * kGHz;
    r.overtone = emission::nearest_overtone(med, cfg.geometry, omega_n);
  } else {
    r.overtone = cfg.geometry.overtone ? *cfg.geometry.overtone : emission::nearest_overtone(med, cfg.geometry, omega0);
    omega_n = emission::overtone_frequency(med, cfg.geometry, r.overtone);
  }
  double g = 0.0;
  if (o.g_mhz) {
    g = *o.g_mhz * kMHz;
  } else {
    const auto field = resolve_field(cfg);
    const double ez = fields::rms_over_disk(field, fields::Component::Z, cfg.geometry.a);
    g = emission::standing_wave_coupling(med, cfg.geometry, r.overtone, ez, cfg.geometry.a).g;
  }
  const double wd = o.omega_diff_khz ? *o.omega_diff_khz * kKHz : emission::diffraction_scale(cfg.geometry, med, omega_n);
  r.params = {g, omega_n, wd};
  r.params.validate();
  return r;
}

inline dynamics::DynamicsMethod parse_method(const std::string& m) {
  if (m == "spectral") return dynamics::DynamicsMethod::kSpectral;
  if (m == "grid") return dynamics::DynamicsMethod::kResolventGrid;
  throw ValidationError("dynamics: method must be spectral or grid");
}

inline std::string dynamics_csv(const DynamicsCliOptions& o, const DeviceConfig& cfg,
                                const emission::AcousticMedium& med, double omega0, unsigned threads) {
  const auto r = resolve_dynamics(o, cfg, med, omega0);
  dynamics::DynamicsOptions opt;
  opt.method = parse_method(o.method);
  opt.fsr = r.fsr;
  opt.threads = threads;
  if (!(o.tmax_us > 0.0)) throw ValidationError("dynamics: --tmax-us must be positive");
  const auto trace = dynamics::full_dynamics(omega0, r.params, o.tmax_us * 1e-6, o.samples, opt);
  CsvWriter csv("dynamics", {"t_us", "Pe"});
  csv.param("omega0_GHz", omega0 / kGHz);
  csv.param("omega_n_GHz", r.params.omega_n / kGHz);
  csv.param("overtone", r.overtone);
  csv.param("g_MHz", r.params.g / kMHz);
  csv.param("omega_diff_kHz", r.params.omega_diff / kKHz);
  csv.param("tmax_us", o.tmax_us);
  csv.param("samples", o.samples);
  csv.param("method", dynamics::tag_name(trace.method));
  csv.param("fsr_MHz", r.fsr / kMHz);
  if (opt.method == dynamics::DynamicsMethod::kSpectral) {
    csv.param("bound_state_weight", trace.bound_state_weight);
    csv.param("spectral_weight", trace.spectral_weight);
  }
  if (trace.single_overtone_warning) csv.note("g exceeds a tenth of the free spectral range; single-overtone model is outside its validity");
  for (std::size_t k = 0; k < trace.times.size(); ++k) csv.row({fmt(trace.times[k] * 1e6), fmt(trace.population[k])});
  return csv.str();
}

}  // namespace detail

/** File name used for one frequency of a dynamics sweep. */
inline std::string dynamics_sweep_filename(double omega0_ghz) { return "dyn_" + fmt(omega0_ghz) + ".csv"; }

inline std::string run_dynamics(const DynamicsCliOptions& o, const CommonOptions& c) {
  const DeviceConfig cfg = device_from(c);
  const auto med = resolve_medium(cfg);
  detail::parse_method(o.method);
  if (o.omega0_ghz_range.empty()) {
    if (!o.omega0_ghz) throw ValidationError("dynamics: --omega0-ghz (or --omega0-ghz-range with --out-dir) is required");
    if (!o.out_dir.empty()) throw ValidationError("dynamics: --out-dir applies to sweeps only");
    return detail::dynamics_csv(o, cfg, med, *o.omega0_ghz * kGHz, c.threads);
  }
  if (o.omega0_ghz) throw ValidationError("dynamics: give either --omega0-ghz or --omega0-ghz-range");
  if (o.out_dir.empty()) throw ValidationError("dynamics: a sweep needs --out-dir");
  const auto freqs = linspace(o.omega0_ghz_range, o.points, "dynamics");
  std::filesystem::create_directories(o.out_dir);
  const auto docs = parallel_map(freqs.size(), c.threads,
                                 [&](std::size_t k) { return detail::dynamics_csv(o, cfg, med, freqs[k] * kGHz, 1); });
  CsvWriter manifest("dynamics", {"freq_GHz", "file"});
  manifest.param("omega0_ghz_range", range_text(o.omega0_ghz_range));
  manifest.param("points", o.points);
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    const std::string name = dynamics_sweep_filename(freqs[k]);
    emit(docs[k], std::filesystem::path(o.out_dir) / name);
    manifest.row({fmt(freqs[k]), name});
  }
  return manifest.str();
}

// -------------------------------------------------------------- bound-states

struct BoundStatesOptions {
  std::string geometry;  // dome or cylinder; config transducer when empty
  std::vector<double> freq_ghz_range{4.99, 5.01};
  double offset_mhz = 0.0;
  int transverse_max = 60;
};

inline std::string run_bound_states(const BoundStatesOptions& o, const CommonOptions& c) {
  DeviceConfig cfg = device_from(c);
  if (!o.geometry.empty()) {
    if (o.geometry != "dome" && o.geometry != "cylinder") throw ValidationError("bound-states: --geometry must be dome or cylinder");
    cfg.geometry_name = o.geometry;
    cfg.geometry = builtin_geometry(o.geometry);
  } else if (std::holds_alternative<emission::Flat>(cfg.geometry.transducer)) {
    throw ValidationError("bound-states: device has a flat transducer; pass --geometry dome|cylinder");
  }
  if (o.transverse_max < 0) throw ValidationError("bound-states: transverse index limit must be non-negative");
  const auto med = resolve_medium(cfg);
  if (o.freq_ghz_range.size() != 2) throw ValidationError("bound-states: range needs two values");
  auto modes = boundstates::modes_in_range(med, cfg.geometry, o.freq_ghz_range[0] * kGHz, o.freq_ghz_range[1] * kGHz,
                                           o.transverse_max);
  std::sort(modes.begin(), modes.end(), [](const auto& x, const auto& y) {
    if (x.omega != y.omega) return x.omega < y.omega;
    if (x.n != y.n) return x.n < y.n;
    if (x.m != y.m) return x.m < y.m;
    return x.l < y.l;
  });
  CsvWriter csv("bound-states", {"freq_GHz", "n", "m", "l", "below_threshold"});
  describe_device(csv, cfg, med);
  csv.param("freq_ghz_range", range_text(o.freq_ghz_range));
  csv.param("offset_MHz", o.offset_mhz);
  csv.param("transverse_max", o.transverse_max);
  const double offset = o.offset_mhz * kMHz;
  for (const auto& m : modes) {
    csv.row({fmt((m.omega + offset) / kGHz), std::to_string(m.n), std::to_string(m.m), std::to_string(m.l),
             m.below_threshold ? "1" : "0"});
  }
  return csv.str();
}

// --------------------------------------------------------------- spectro-fit

struct SpectroFitOptions {
  std::string input;
  std::optional<double> chi_mhz;
  std::optional<double> g_mhz;
  std::optional<double> delta_mhz;
  double init_gamma2_khz = 40.0;
  double init_kappa_khz = 20.0;
  double init_nbar = -1.0;  // negative: estimate from the two tallest peaks
};

/** Reads `freq_GHz, intensity` rows; '#' lines and a non-numeric header are skipped. */
inline spectroscopy::SpectrumData read_spectrum_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open spectrum file " + path);
  spectroscopy::SpectrumData data;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    const auto cells = fields::detail::split_csv(line);
    if (cells.size() != 2) throw ValidationError(path + ": line " + std::to_string(line_no) + " needs 2 columns");
    if (!header_seen && data.omega.empty() && cells[0] == "freq_GHz") {
      if (cells[1] != "intensity") throw ValidationError(path + ": expected header 'freq_GHz,intensity'");
      header_seen = true;
      continue;
    }
    const std::string where = path + ": line " + std::to_string(line_no);
    data.omega.push_back(fields::detail::parse_number(cells[0], where) * kGHz);
    data.intensity.push_back(fields::detail::parse_number(cells[1], where));
  }
  return data;
}

inline std::string run_spectro_fit(const SpectroFitOptions& o, const CommonOptions&) {
  double chi = 0.0;
  if (o.chi_mhz) {
    if (o.delta_mhz) throw ValidationError("spectro-fit: give --chi-mhz or --g-mhz with --delta-mhz, not both");
    chi = *o.chi_mhz * kMHz;
  } else {
    if (!o.g_mhz || !o.delta_mhz) throw ValidationError("spectro-fit: --chi-mhz (or --g-mhz and --delta-mhz) is required");
    chi = spectroscopy::dispersive_shift(*o.g_mhz * kMHz, *o.delta_mhz * kMHz);
  }
  if (!(o.init_gamma2_khz > 0.0) || !(o.init_kappa_khz >= 0.0)) {
    throw ValidationError("spectro-fit: initial gamma2 must be positive and kappa non-negative");
  }
  const auto data = read_spectrum_csv(o.input);
  const auto init = spectroscopy::estimate_initial(data, chi, o.init_gamma2_khz * kKHz, o.init_kappa_khz * kKHz,
                                                   o.init_nbar);
  const auto fit = spectroscopy::fit_spectrum(data, chi, init);
  const auto& m = fit.model;
  nlohmann::json j;
  j["input"] = std::filesystem::path(o.input).filename().string();
  j["samples"] = data.omega.size();
  j["chi_MHz"] = chi / kMHz;
  j["fit"] = {{"omega_tilde0_GHz", m.omega_tilde0 / kGHz}, {"gamma2_kHz", m.gamma2 / kKHz},
              {"kappa_kHz", m.kappa / kKHz},             {"nbar", m.nbar},
              {"amplitude", m.amplitude},                {"baseline", m.baseline}};
  j["uncertainty"] = {{"omega_tilde0_GHz", fit.sigma_omega_tilde0 / kGHz}, {"gamma2_kHz", fit.sigma_gamma2 / kKHz},
                      {"kappa_kHz", fit.sigma_kappa / kKHz},             {"nbar", fit.sigma_nbar},
                      {"amplitude", fit.sigma_amplitude},                {"baseline", fit.sigma_baseline}};
  j["initial"] = {{"omega_tilde0_GHz", init.omega_tilde0 / kGHz}, {"gamma2_kHz", init.gamma2 / kKHz},
                  {"kappa_kHz", init.kappa / kKHz},             {"nbar", init.nbar}};
  j["residual_norm"] = fit.residual_norm;
  j["iterations"] = fit.iterations;
  j["linewidth_step_kHz"] = (spectroscopy::linewidth(1, m.gamma2, m.kappa) - spectroscopy::linewidth(0, m.gamma2, m.kappa)) / kKHz;
  if (o.g_mhz && m.kappa > 0.0) j["cooperativity"] = spectroscopy::cooperativity(*o.g_mhz * kMHz, m.kappa, m.gamma2);
  return json_text(j);
}

// ----------------------------------------------------------------- splitting

struct SplittingOptions {
  std::string material = "sapphire";
  double freq_ghz = 5.0;
  double phi_deg = 0.0;
  std::vector<double> tilt_deg_range{0.0, 0.5};
  std::size_t points = 11;
};

inline std::string run_splitting(const SplittingOptions& o, const CommonOptions& c) {
  const auto mat = resolve_material(o.material);
  mat.validate();
  const auto tilts = linspace(o.tilt_deg_range, o.points, "splitting");
  const double omega0 = o.freq_ghz * kGHz;
  const auto rows = parallel_map(tilts.size(), c.threads, [&](std::size_t k) {
    const double t = tilts[k] * kDeg;
    return std::pair<double, double>{elastodynamics::shear_splitting(mat, omega0, t, o.phi_deg * kDeg),
                                     elastodynamics::shear_splitting_numerical(mat, omega0, t, o.phi_deg * kDeg)};
  });
  CsvWriter csv("splitting", {"tilt_deg", "split_perturbative_MHz", "split_numerical_MHz"});
  csv.param("material", mat.name);
  csv.param("freq_GHz", o.freq_ghz);
  csv.param("phi_deg", o.phi_deg);
  csv.param("tilt_deg_range", range_text(o.tilt_deg_range));
  csv.param("points", o.points);
  for (std::size_t k = 0; k < tilts.size(); ++k) {
    csv.row({fmt(tilts[k]), fmt(rows[k].first / kMHz), fmt(rows[k].second / kMHz)});
  }
  return csv.str();
}

}  // namespace phonoscope::cli
