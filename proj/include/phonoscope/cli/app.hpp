#pragma once

#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "phonoscope/cli/commands.hpp"

namespace phonoscope::cli {

inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitConvergence = 3;

namespace detail {

inline void add_common(CLI::App* sub, CommonOptions& c, bool sweep) {
  sub->add_option("--out", c.out, "Output file (standard output when omitted)");
  sub->add_option("--config", c.config, "Device config JSON (materials, geometry, field, overrides)");
  sub->add_option("--field-map-dir", c.field_map_dir, "Directory holding Ex.csv, Ey.csv, Ez.csv");
  if (sweep) sub->add_option("--threads", c.threads, "Worker threads for the sweep")->check(CLI::PositiveNumber);
}

inline void add_range(CLI::App* sub, const std::string& name, std::vector<double>& v, const std::string& help) {
  sub->add_option(name, v, help)->delimiter(',')->expected(2);
}

}  // namespace detail

/** Parses argv, runs one subcommand and maps failures onto exit codes 1 (usage), 2 (validation), 3 (convergence). */
inline int run(int argc, const char* const* argv) {
  CLI::App app{"Phonon emission, bound states and qubit dynamics for piezoelectric transducers", "phonoscope"};
  app.require_subcommand(1, 1);
  CommonOptions common;
  std::function<std::string()> action;

  MaterialsOptions mat;
  auto* s_mat = app.add_subcommand("materials", "Report velocities and tensors of a material preset");
  s_mat->add_option("--preset", mat.preset, "Preset name or preset JSON path")->capture_default_str();
  detail::add_common(s_mat, common, false);
  s_mat->callback([&] { action = [&] { return run_materials(mat, common); }; });

  VelocitySurfaceOptions vs;
  auto* s_vs = app.add_subcommand("velocity-surface", "Bulk-wave velocities versus polar angle");
  s_vs->add_option("--material", vs.material, "Preset name or preset JSON path")->capture_default_str();
  s_vs->add_option("--phi-deg", vs.phi_deg, "Azimuth of the plane (deg)")->capture_default_str();
  detail::add_range(s_vs, "--theta-deg-range", vs.theta_deg_range, "Polar-angle range lo,hi (deg)");
  s_vs->add_option("--samples", vs.samples, "Number of angles")->capture_default_str();
  detail::add_common(s_vs, common, true);
  s_vs->callback([&] { action = [&] { return run_velocity_surface(vs, common); }; });

  EmitRateOptions er;
  auto* s_er = app.add_subcommand("emit-rate", "Free-space phonon emission rates versus qubit frequency");
  s_er->add_option("--material", er.material, "Substrate preset (default from config: sapphire)");
  s_er->add_option("--film", er.film, "Piezoelectric film preset (default from config: aln)");
  s_er->add_option("--geometry", er.geometry, "Built-in geometry: flat, rough, dome, cylinder");
  detail::add_range(s_er, "--freq-ghz-range", er.freq_ghz_range, "Frequency range lo,hi (GHz)");
  s_er->add_option("--points", er.points, "Number of frequencies")->capture_default_str();
  s_er->add_option("--e33", er.e33, "Override e33 (C/m^2)");
  s_er->add_option("--e15", er.e15, "Override e15 (C/m^2)");
  detail::add_common(s_er, common, true);
  s_er->callback([&] { action = [&] { return run_emit_rate(er, common); }; });

  DecaySpectrumOptions ds;
  auto* s_ds = app.add_subcommand("decay-spectrum", "Golden-rule decay rate of the qubit into resonator overtones");
  s_ds->add_option("--material", ds.material, "Substrate preset");
  s_ds->add_option("--film", ds.film, "Piezoelectric film preset");
  s_ds->add_option("--geometry", ds.geometry, "Built-in geometry: flat, rough, dome, cylinder");
  detail::add_range(s_ds, "--freq-ghz-range", ds.freq_ghz_range, "Frequency range lo,hi (GHz)");
  s_ds->add_option("--points", ds.points, "Number of frequencies")->capture_default_str();
  s_ds->add_option("--e33", ds.e33, "Override e33 (C/m^2)");
  s_ds->add_option("--e15", ds.e15, "Override e15 (C/m^2)");
  s_ds->add_flag("--shear", ds.shear, "Add the two shear ladders driven by Ex and Ey");
  s_ds->add_option("--tilt-deg", ds.tilt_deg, "Crystal tilt splitting the shear ladders (deg)")->capture_default_str();
  s_ds->add_option("--overtone-window", ds.overtone_window, "Overtones summed below each frequency")->capture_default_str();
  detail::add_common(s_ds, common, true);
  s_ds->callback([&] { action = [&] { return run_decay_spectrum(ds, common); }; });

  DynamicsCliOptions dy;
  auto* s_dy = app.add_subcommand("dynamics", "Qubit population coupled to one overtone's continuum");
  s_dy->add_option("--omega0-ghz", dy.omega0_ghz, "Qubit frequency (GHz)");
  s_dy->add_option("--omega-n-ghz", dy.omega_n_ghz, "Overtone frequency (GHz; default nearest device overtone)");
  s_dy->add_option("--g-mhz", dy.g_mhz, "Coupling g/2pi (MHz; default from the device)");
  s_dy->add_option("--omega-diff-khz", dy.omega_diff_khz, "Diffraction scale (kHz; default from the device)");
  s_dy->add_option("--tmax-us", dy.tmax_us, "Final time (us)")->capture_default_str();
  s_dy->add_option("--samples", dy.samples, "Number of time samples")->capture_default_str();
  s_dy->add_option("--method", dy.method, "spectral or grid")->capture_default_str();
  detail::add_range(s_dy, "--omega0-ghz-range", dy.omega0_ghz_range, "Sweep qubit frequency lo,hi (GHz)");
  s_dy->add_option("--points", dy.points, "Sweep points")->capture_default_str();
  s_dy->add_option("--out-dir", dy.out_dir, "Sweep output directory for dyn_<freq_GHz>.csv files");
  detail::add_common(s_dy, common, true);
  s_dy->callback([&] { action = [&] { return run_dynamics(dy, common); }; });

  BoundStatesOptions bs;
  auto* s_bs = app.add_subcommand("bound-states", "Transducer-confined modes and their threshold status");
  s_bs->add_option("--geometry", bs.geometry, "dome or cylinder (default: config transducer)");
  detail::add_range(s_bs, "--freq-ghz-range", bs.freq_ghz_range, "Frequency range lo,hi (GHz)");
  s_bs->add_option("--offset-mhz", bs.offset_mhz, "Constant offset added to every frequency (MHz)")->capture_default_str();
  s_bs->add_option("--transverse-max", bs.transverse_max, "Largest transverse index")->capture_default_str();
  detail::add_common(s_bs, common, false);
  s_bs->callback([&] { action = [&] { return run_bound_states(bs, common); }; });

  SpectroFitOptions sf;
  auto* s_sf = app.add_subcommand("spectro-fit", "Fit a number-split qubit spectrum");
  s_sf->add_option("--input", sf.input, "CSV with columns freq_GHz, intensity")->required();
  s_sf->add_option("--chi-mhz", sf.chi_mhz, "Dispersive shift chi/2pi (MHz)");
  s_sf->add_option("--g-mhz", sf.g_mhz, "Coupling g/2pi (MHz) for chi and cooperativity");
  s_sf->add_option("--delta-mhz", sf.delta_mhz, "Detuning Delta/2pi (MHz) for chi = 2g^2/Delta");
  s_sf->add_option("--init-gamma2-khz", sf.init_gamma2_khz, "Initial gamma2/2pi (kHz)")->capture_default_str();
  s_sf->add_option("--init-kappa-khz", sf.init_kappa_khz, "Initial kappa/2pi (kHz)")->capture_default_str();
  s_sf->add_option("--init-nbar", sf.init_nbar, "Initial mean phonon number (negative: estimate)")->capture_default_str();
  detail::add_common(s_sf, common, false);
  s_sf->callback([&] { action = [&] { return run_spectro_fit(sf, common); }; });

  SplittingOptions sp;
  auto* s_sp = app.add_subcommand("splitting", "Shear-wave splitting versus crystal tilt");
  s_sp->add_option("--material", sp.material, "Preset name or preset JSON path")->capture_default_str();
  s_sp->add_option("--freq-ghz", sp.freq_ghz, "Qubit frequency (GHz)")->capture_default_str();
  s_sp->add_option("--phi-deg", sp.phi_deg, "Tilt azimuth (deg)")->capture_default_str();
  detail::add_range(s_sp, "--tilt-deg-range", sp.tilt_deg_range, "Tilt range lo,hi (deg)");
  s_sp->add_option("--points", sp.points, "Number of tilts")->capture_default_str();
  detail::add_common(s_sp, common, true);
  s_sp->callback([&] { action = [&] { return run_splitting(sp, common); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "phonoscope: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    emit(action(), common.out);
    return 0;
  } catch (const ConvergenceError& e) {
    std::cerr << "phonoscope: convergence failure: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const std::exception& e) {
    std::cerr << "phonoscope: error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace phonoscope::cli
