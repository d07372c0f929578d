#include <gtest/gtest.h>
#include <sys/wait.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "phonoscope/cli/app.hpp"
#include "phonoscope/spectroscopy/dispersive.hpp"

namespace fs = std::filesystem;
using namespace phonoscope;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

/** Scratch directory removed on destruction. */
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() / ("phonoscope_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

/** Runs the installed binary as a child process and captures both streams. */
Result spawn(const std::vector<std::string>& args, const std::string& env = "") {
  TempDir io;
  std::string cmd = env.empty() ? "" : env + " ";
  cmd += quote(PHONOSCOPE_CLI_PATH);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " >" + quote((io / "out").string()) + " 2>" + quote((io / "err").string());
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(io / "out");
  r.err = slurp(io / "err");
  return r;
}

/** Splits a CSV document into comment lines, the column header and data rows. */
struct Csv {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream s(line);
  std::string cell;
  while (std::getline(s, cell, ',')) cells.push_back(cell);
  return cells;
}

Csv parse_csv(const std::string& text) {
  Csv csv;
  std::stringstream s(text);
  std::string line;
  while (std::getline(s, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      csv.comments.push_back(line);
    } else if (csv.columns.empty()) {
      csv.columns = split(line);
    } else {
      csv.rows.push_back(split(line));
    }
  }
  return csv;
}

bool has_comment(const Csv& csv, const std::string& prefix) {
  for (const auto& c : csv.comments)
    if (c.rfind(prefix, 0) == 0) return true;
  return false;
}

/** Writes a synthetic number-split spectrum as `freq_GHz,intensity`. */
void write_spectrum(const fs::path& p, double kappa_khz, bool flat = false) {
  const double two_pi = 2.0 * oracle::pi;
  spectroscopy::DispersiveModel m;
  m.omega_tilde0 = two_pi * 6.69e9;
  m.chi = -two_pi * 0.35e6;
  m.gamma2 = two_pi * 39.8e3;
  m.kappa = two_pi * kappa_khz * 1e3;
  m.nbar = 1.0;
  m.n_max = spectroscopy::required_cutoff(1.0);
  std::vector<double> omega;
  for (int k = 0; k < 401; ++k) omega.push_back(m.omega_tilde0 + (-5.0 + 6.5 * k / 400.0) * std::abs(m.chi));
  const auto y = spectroscopy::spectrum_model(m, omega);
  std::ostringstream s;
  s << "freq_GHz,intensity\n";
  s.precision(17);
  for (std::size_t k = 0; k < omega.size(); ++k) s << omega[k] / two_pi / 1e9 << "," << (flat ? 1.0 : y[k] * 1e6) << "\n";
  write_file(p, s.str());
}

}  // namespace

// ---------------------------------------------------------------- exit codes

TEST(CliExitCodes, UnknownSubcommandIsUsageError) {
  const auto r = spawn({"frobnicate"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(CliExitCodes, MissingSubcommandAndBadFlagAreUsageErrors) {
  EXPECT_EQ(spawn({}).code, 1);
  EXPECT_EQ(spawn({"materials", "--no-such-flag"}).code, 1);
  EXPECT_EQ(spawn({"emit-rate", "--points", "many"}).code, 1);
  EXPECT_EQ(spawn({"spectro-fit"}).code, 1);  // --input is required
}

TEST(CliExitCodes, ValidationErrorsExitTwo) {
  auto r = spawn({"materials", "--preset", "unobtainium"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("unobtainium"), std::string::npos);
  EXPECT_EQ(spawn({"emit-rate", "--geometry", "pyramid"}).code, 2);
  EXPECT_EQ(spawn({"emit-rate", "--e33", "-1"}).code, 2);
  EXPECT_EQ(spawn({"dynamics"}).code, 2);
  EXPECT_EQ(spawn({"bound-states"}).code, 2);  // default device has a flat transducer
}

TEST(CliExitCodes, ConvergenceFailureExitsThree) {
  TempDir dir;
  write_spectrum(dir / "flat.csv", 21.8, true);
  const auto r = spawn({"spectro-fit", "--input", (dir / "flat.csv").string(), "--chi-mhz", "-0.35"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("convergence"), std::string::npos);
}

TEST(CliExitCodes, HelpExitsZero) {
  const auto r = spawn({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("decay-spectrum"), std::string::npos);
}

// ---------------------------------------------------------------- subcommands

TEST(CliMaterials, SapphireLongitudinalVelocity) {
  const auto r = spawn({"materials", "--preset", "sapphire"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["velocities_km_s"]["v_l"].get<double>(), 11.2, 0.05);
  EXPECT_NEAR(j["rho_kg_m3"].get<double>(), 3980.0, 5.0);
  EXPECT_EQ(j["c_GPa"].size(), 6u);
}

TEST(CliMaterials, PiezoelectricFilmReportsStiffenedTensor) {
  const auto r = spawn({"materials", "--preset", "aln"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_TRUE(j.contains("e_C_m2"));
  ASSERT_TRUE(j.contains("stiffened_c_GPa"));
  EXPECT_GT(j["stiffened_c_GPa"][2][2].get<double>(), j["c_GPa"][2][2].get<double>());
}

TEST(CliMaterials, PresetDirectoryFromEnvironment) {
  TempDir dir;
  fs::copy_file(fs::path(PHONOSCOPE_DEFAULT_PRESET_DIR) / "sapphire.json", dir / "quartzlike.json");
  const auto r = spawn({"materials", "--preset", "quartzlike"}, "PHONOSCOPE_PRESET_DIR=" + quote(dir.path().string()));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(spawn({"materials", "--preset", "quartzlike"}).code, 2);
}

TEST(CliOutput, CsvHeaderRecordsParameters) {
  const auto r = spawn({"emit-rate", "--points", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_EQ(r.out.rfind("# phonoscope emit-rate", 0), 0u);
  const auto csv = parse_csv(r.out);
  EXPECT_TRUE(has_comment(csv, "# substrate = sapphire"));
  EXPECT_TRUE(has_comment(csv, "# points = 3"));
  EXPECT_TRUE(has_comment(csv, "# e33_C_m2 = "));
  const std::vector<std::string> cols{"freq_GHz", "gamma_l_Hz", "gamma_sh_x_Hz", "gamma_sh_y_Hz", "gamma_total_Hz"};
  EXPECT_EQ(csv.columns, cols);
  ASSERT_EQ(csv.rows.size(), 3u);
  EXPECT_EQ(csv.rows[0][0], "4");
  EXPECT_EQ(csv.rows[2][0], "8");
}

TEST(CliOutput, NumbersUseNineSignificantDigits) {
  EXPECT_EQ(cli::fmt(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(cli::fmt(2.0), "2");
  EXPECT_EQ(cli::fmt(123456789012.0), "1.23456789e+11");
  const auto r = spawn({"decay-spectrum", "--points", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& row : parse_csv(r.out).rows) {
    for (const auto& cell : row) {
      std::string digits;
      for (char ch : cell.substr(0, cell.find('e'))) {
        if (std::isdigit(static_cast<unsigned char>(ch))) digits += ch;
      }
      const auto first = digits.find_first_not_of('0');
      EXPECT_LE(first == std::string::npos ? 0 : digits.size() - first, 9u) << cell;
    }
  }
}

TEST(CliOutput, OutFlagWritesFileAndNothingToStdout) {
  TempDir dir;
  const auto target = dir / "sub" / "rates.csv";
  const auto r = spawn({"emit-rate", "--points", "2", "--out", target.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(slurp(target), spawn({"emit-rate", "--points", "2"}).out);
}

TEST(CliDeterminism, RepeatedRunsAreByteIdentical) {
  TempDir dir;
  const std::vector<std::vector<std::string>> runs = {
      {"decay-spectrum", "--points", "101", "--shear"},
      {"velocity-surface", "--samples", "37"},
      {"splitting", "--points", "5"},
      {"bound-states", "--geometry", "dome"},
  };
  for (std::size_t i = 0; i < runs.size(); ++i) {
    auto a = runs[i];
    auto b = runs[i];
    a.insert(a.end(), {"--out", (dir / ("a" + std::to_string(i))).string()});
    b.insert(b.end(), {"--out", (dir / ("b" + std::to_string(i))).string()});
    ASSERT_EQ(spawn(a).code, 0);
    ASSERT_EQ(spawn(b).code, 0);
    EXPECT_EQ(slurp(dir / ("a" + std::to_string(i))), slurp(dir / ("b" + std::to_string(i)))) << runs[i][0];
  }
}

TEST(CliDeterminism, ThreadCountDoesNotChangeOutput) {
  const auto one = spawn({"decay-spectrum", "--points", "201", "--threads", "1"});
  const auto many = spawn({"decay-spectrum", "--points", "201", "--threads", "7"});
  ASSERT_EQ(one.code, 0);
  EXPECT_EQ(one.out, many.out);
  const auto v1 = spawn({"velocity-surface", "--samples", "91", "--threads", "1"});
  const auto v4 = spawn({"velocity-surface", "--samples", "91", "--threads", "4"});
  EXPECT_EQ(v1.out, v4.out);
  EXPECT_EQ(spawn({"velocity-surface", "--threads", "0"}).code, 1);
}

// ---------------------------------------------------------------- config schema

TEST(CliConfig, ValidConfigIsApplied) {
  TempDir dir;
  write_file(dir / "device.json", R"({
    "materials": {"substrate": "sapphire", "film": "aln"},
    "geometry": {"preset": "rough", "transducer": {"type": "cylinder", "z0": 1e-6, "r": 125e-6}},
    "field": {"type": "disk", "ez": 2.0e-4, "radius": 100e-6},
    "overrides": {"e33": 1.2}
  })");
  const auto r = spawn({"emit-rate", "--points", "2", "--config", (dir / "device.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = parse_csv(r.out);
  EXPECT_TRUE(has_comment(csv, "# b_m = 0.00043"));
  EXPECT_TRUE(has_comment(csv, "# e33_C_m2 = 1.2"));
  EXPECT_TRUE(has_comment(csv, "# transducer = cylinder"));
  EXPECT_TRUE(has_comment(csv, "# field = disk"));
}

TEST(CliConfig, RelativeFieldDirectoryResolvesAgainstConfig) {
  TempDir dir;
  fs::create_directories(dir / "maps");
  for (const char* f : {"Ex.csv", "Ey.csv", "Ez.csv"}) {
    fs::copy_file(fs::path(PHONOSCOPE_DEFAULT_FIELD_DIR) / f, dir / "maps" / f);
  }
  write_file(dir / "device.json", R"({"field": {"type": "grid", "dir": "maps"}})");
  const auto with_cfg = spawn({"emit-rate", "--points", "2", "--config", (dir / "device.json").string()});
  ASSERT_EQ(with_cfg.code, 0) << with_cfg.err;
  const auto plain = spawn({"emit-rate", "--points", "2"});
  // same field values, only the recorded source differs
  const auto a = parse_csv(with_cfg.out), b = parse_csv(plain.out);
  EXPECT_EQ(a.rows, b.rows);
  EXPECT_TRUE(has_comment(a, "# field = grid:maps"));
}

TEST(CliConfig, SchemaViolationsExitTwo) {
  TempDir dir;
  const std::vector<std::string> bad = {
      R"({"material": {}})",
      R"({"materials": {"substrate": 3}})",
      R"({"materials": {"substrate": "sapphire", "colour": "blue"}})",
      R"({"geometry": {"b": 1e-4}})",
      R"({"geometry": {"preset": "flat", "b": -1}})",
      R"({"geometry": {"preset": "flat", "overtone": 0}})",
      R"({"geometry": {"preset": "flat", "transducer": {"type": "dome", "z0": 1e-6}}})",
      R"({"geometry": {"preset": "flat", "transducer": {"type": "prism"}}})",
      R"({"field": {"type": "disk", "ez": 1.0}})",
      R"({"field": {"type": "grid", "ez": 1.0}})",
      R"({"field": {"type": "grid", "dir": "does-not-exist"}})",
      R"({"overrides": {"e33": 0}})",
      R"({"overrides": {"d33": 1}})",
      R"([1, 2])",
      R"({"materials": )",
  };
  for (std::size_t i = 0; i < bad.size(); ++i) {
    const auto p = dir / ("bad" + std::to_string(i) + ".json");
    write_file(p, bad[i]);
    const auto r = spawn({"emit-rate", "--points", "2", "--config", p.string()});
    EXPECT_EQ(r.code, 2) << bad[i];
    EXPECT_FALSE(r.err.empty()) << bad[i];
  }
  EXPECT_EQ(spawn({"emit-rate", "--config", (dir / "missing.json").string()}).code, 2);
}

// ---------------------------------------------------------------- formats read by the plotting component

TEST(CliFormats, DecaySpectrumColumnsAndFsr) {
  const auto r = spawn({"decay-spectrum", "--points", "11"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = parse_csv(r.out);
  EXPECT_EQ(csv.columns, (std::vector<std::string>{"freq_GHz", "gamma_Hz"}));
  EXPECT_EQ(csv.rows.size(), 11u);
  EXPECT_TRUE(has_comment(csv, "# fsr_longitudinal_MHz = "));
  for (const auto& row : csv.rows) EXPECT_GE(std::stod(row[1]), 0.0);
}

TEST(CliFormats, DynamicsSweepWritesOneFilePerFrequency) {
  TempDir dir;
  const auto out_dir = dir / "sweep";
  const auto r = spawn({"dynamics", "--omega0-ghz-range", "5.85,5.9", "--points", "3", "--samples", "21", "--tmax-us",
                        "1", "--out-dir", out_dir.string(), "--threads", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto manifest = parse_csv(r.out);
  EXPECT_EQ(manifest.columns, (std::vector<std::string>{"freq_GHz", "file"}));
  ASSERT_EQ(manifest.rows.size(), 3u);
  const std::vector<std::string> names{"dyn_5.85.csv", "dyn_5.875.csv", "dyn_5.9.csv"};
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(manifest.rows[k][1], names[k]);
    ASSERT_TRUE(fs::exists(out_dir / names[k]));
    const auto doc = parse_csv(slurp(out_dir / names[k]));
    EXPECT_EQ(doc.columns, (std::vector<std::string>{"t_us", "Pe"}));
    EXPECT_EQ(doc.rows.size(), 21u);
    EXPECT_TRUE(has_comment(doc, "# omega0_GHz = " + manifest.rows[k][0]));
    EXPECT_NEAR(std::stod(doc.rows[0][1]), 1.0, 1e-6);
  }
  EXPECT_EQ(cli::dynamics_sweep_filename(6.0), "dyn_6.csv");
}

TEST(CliFormats, DynamicsSweepMatchesSinglePointRuns) {
  TempDir dir;
  ASSERT_EQ(spawn({"dynamics", "--omega0-ghz-range", "5.85,5.9", "--points", "2", "--samples", "11", "--tmax-us", "1",
                   "--out-dir", (dir / "s").string()})
                .code,
            0);
  const auto single = spawn({"dynamics", "--omega0-ghz", "5.9", "--samples", "11", "--tmax-us", "1", "--threads", "1"});
  ASSERT_EQ(single.code, 0) << single.err;
  EXPECT_EQ(slurp(dir / "s" / "dyn_5.9.csv"), single.out);
}

TEST(CliFormats, DynamicsArgumentConflicts) {
  TempDir dir;
  EXPECT_EQ(spawn({"dynamics", "--omega0-ghz-range", "5.8,5.9"}).code, 2);
  EXPECT_EQ(spawn({"dynamics", "--omega0-ghz", "5.9", "--out-dir", dir.path().string()}).code, 2);
  EXPECT_EQ(spawn({"dynamics", "--omega0-ghz", "5.9", "--method", "magic"}).code, 2);
}

TEST(CliFormats, BoundStatesSticksAndOffset) {
  const auto base = spawn({"bound-states", "--geometry", "cylinder", "--freq-ghz-range", "4.95,5.05"});
  ASSERT_EQ(base.code, 0) << base.err;
  const auto csv = parse_csv(base.out);
  EXPECT_EQ(csv.columns, (std::vector<std::string>{"freq_GHz", "n", "m", "l", "below_threshold"}));
  ASSERT_FALSE(csv.rows.empty());
  const auto shifted = parse_csv(spawn({"bound-states", "--geometry", "cylinder", "--freq-ghz-range", "4.95,5.05",
                                        "--offset-mhz", "2.5"})
                                     .out);
  ASSERT_EQ(shifted.rows.size(), csv.rows.size());
  for (std::size_t k = 0; k < csv.rows.size(); ++k) {
    EXPECT_NEAR(std::stod(shifted.rows[k][0]) - std::stod(csv.rows[k][0]), 2.5e-3, 1e-8);
    EXPECT_EQ(shifted.rows[k][4], csv.rows[k][4]);
  }
  EXPECT_EQ(spawn({"bound-states", "--geometry", "flat"}).code, 2);
}

TEST(CliFormats, SpectroFitReport) {
  TempDir dir;
  write_spectrum(dir / "spec.csv", 21.8);
  const auto r = spawn({"spectro-fit", "--input", (dir / "spec.csv").string(), "--g-mhz", "1.35", "--delta-mhz", "-10.5",
                        "--init-gamma2-khz", "50", "--init-kappa-khz", "15"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["chi_MHz"].get<double>(), -0.347, 1e-3);
  ASSERT_TRUE(j.contains("fit"));
  ASSERT_TRUE(j.contains("uncertainty"));
  EXPECT_TRUE(j.contains("residual_norm"));
  EXPECT_TRUE(j.contains("cooperativity"));
}

TEST(CliFormats, SpectroFitRecoversKappaWithGivenChi) {
  TempDir dir;
  write_spectrum(dir / "spec.csv", 21.8);
  const auto r = spawn({"spectro-fit", "--input", (dir / "spec.csv").string(), "--chi-mhz", "-0.35"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["fit"]["kappa_kHz"].get<double>(), 21.8, 0.03);
  EXPECT_NEAR(j["fit"]["gamma2_kHz"].get<double>(), 39.8, 0.04);
  EXPECT_NEAR(j["linewidth_step_kHz"].get<double>(), j["fit"]["kappa_kHz"].get<double>(), 1e-6);
}

TEST(CliFormats, SpectroFitInputErrors) {
  TempDir dir;
  write_file(dir / "short.csv", "freq_GHz,intensity\n6.69,1\n6.70,2\n");
  EXPECT_EQ(spawn({"spectro-fit", "--input", (dir / "short.csv").string(), "--chi-mhz", "-0.35"}).code, 2);
  write_file(dir / "header.csv", "freq_GHz,power\n6.69,1\n");
  EXPECT_EQ(spawn({"spectro-fit", "--input", (dir / "header.csv").string(), "--chi-mhz", "-0.35"}).code, 2);
  EXPECT_EQ(spawn({"spectro-fit", "--input", (dir / "missing.csv").string(), "--chi-mhz", "-0.35"}).code, 2);
  write_spectrum(dir / "spec.csv", 21.8);
  EXPECT_EQ(spawn({"spectro-fit", "--input", (dir / "spec.csv").string()}).code, 2);
  EXPECT_EQ(spawn({"spectro-fit", "--input", (dir / "spec.csv").string(), "--chi-mhz", "-0.35", "--delta-mhz", "-10"}).code,
            2);
}

TEST(CliFormats, VelocitySurfaceAndSplittingColumns) {
  const auto vs = parse_csv(spawn({"velocity-surface", "--samples", "5"}).out);
  EXPECT_EQ(vs.columns, (std::vector<std::string>{"theta_deg", "v1_kms", "v2_kms", "v3_kms"}));
  EXPECT_EQ(vs.rows.size(), 5u);
  const auto sp = parse_csv(spawn({"splitting", "--points", "3"}).out);
  EXPECT_EQ(sp.columns, (std::vector<std::string>{"tilt_deg", "split_perturbative_MHz", "split_numerical_MHz"}));
  EXPECT_EQ(sp.rows.size(), 3u);
}

// ---------------------------------------------------------------- in-process dispatch

TEST(CliInProcess, RunReturnsSameCodesAsBinary) {
  const char* usage[] = {"phonoscope", "nope"};
  testing::internal::CaptureStderr();
  EXPECT_EQ(cli::run(2, usage), cli::kExitUsage);
  const char* invalid[] = {"phonoscope", "materials", "--preset", "unobtainium"};
  EXPECT_EQ(cli::run(4, invalid), cli::kExitValidation);
  testing::internal::GetCapturedStderr();
}

TEST(CliInProcess, ConfigParserDefaults) {
  const auto cfg = cli::parse_config(nlohmann::json::object());
  EXPECT_EQ(cfg.substrate, "sapphire");
  EXPECT_EQ(cfg.film, "aln");
  EXPECT_EQ(cfg.geometry.b, 100e-6);
  EXPECT_TRUE(std::holds_alternative<emission::Flat>(cfg.geometry.transducer));
  const auto dome = cli::builtin_geometry("dome");
  EXPECT_NEAR(dome.dome_curvature(), 7.8e-3, 1e-12);
}
