#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "phonoscope/emission/geometry.hpp"
#include "phonoscope/emission/medium.hpp"
#include "phonoscope/fields/field_map_io.hpp"
#include "phonoscope/fields/profile.hpp"
#include "phonoscope/cli/output.hpp"
#include "phonoscope/materials/presets.hpp"

namespace phonoscope::cli {

/** Where the qubit field comes from: a field-map directory or a uniform disk. */
struct FieldSource {
  enum class Kind { kGrid, kDisk };
  Kind kind = Kind::kGrid;
  std::filesystem::path dir;  // empty means the bundled reference grid
  double ez = 0.0;            // V/m, disk only
  double radius = 0.0;        // m, disk only
};

/** Constants that replace the material-derived values when set. */
struct Overrides {
  std::optional<double> e33;
  std::optional<double> e15;
  std::optional<double> v_perp;
};

struct DeviceConfig {
  std::string substrate = "sapphire";
  std::string film = "aln";
  std::string geometry_name = "flat";
  emission::DeviceGeometry geometry;
  FieldSource field;
  Overrides overrides;
};

/** Built-in devices: flat (b = 100 um), rough (b = 430 um), dome (R = 7.8 mm), cylinder (r = 125 um). */
inline emission::DeviceGeometry builtin_geometry(const std::string& name) {
  emission::DeviceGeometry g;
  g.b = 100e-6;
  g.b_p = 1e-6;
  g.a = 300e-6;
  if (name == "flat") {
  } else if (name == "rough") {
    g.b = 430e-6;
  } else if (name == "dome") {
    g.transducer = emission::Dome{1e-6, std::sqrt(2.0 * 1e-6 * 7.8e-3)};
  } else if (name == "cylinder") {
    g.transducer = emission::Cylinder{1e-6, 125e-6};
  } else {
    throw ValidationError("unknown geometry '" + name + "' (expected flat, rough, dome or cylinder)");
  }
  return g;
}

inline DeviceConfig default_config() {
  DeviceConfig c;
  c.geometry = builtin_geometry(c.geometry_name);
  return c;
}

namespace detail {

inline void check_keys(const nlohmann::json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ValidationError("config: '" + where + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ValidationError("config: unknown key '" + where + "." + key + "'");
  }
}

inline double positive_number(const nlohmann::json& j, const std::string& where) {
  if (!j.is_number()) throw ValidationError("config: '" + where + "' must be a number");
  const double v = j.get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("config: '" + where + "' must be positive");
  return v;
}

inline double finite_number(const nlohmann::json& j, const std::string& where) {
  if (!j.is_number()) throw ValidationError("config: '" + where + "' must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ValidationError("config: '" + where + "' must be finite");
  return v;
}

inline std::string string_value(const nlohmann::json& j, const std::string& where) {
  if (!j.is_string()) throw ValidationError("config: '" + where + "' must be a string");
  return j.get<std::string>();
}

}  // namespace detail

/**
 * Validates a config document against the schema and folds it over the
 * defaults. Lengths are in metres, fields in V/m. Relative field-map paths
 * resolve against `base_dir`.
 */
inline DeviceConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {}) {
  using detail::check_keys;
  check_keys(doc, "<root>", {"materials", "geometry", "field", "overrides"});
  DeviceConfig cfg = default_config();

  if (doc.contains("materials")) {
    const auto& m = doc["materials"];
    check_keys(m, "materials", {"substrate", "film"});
    if (m.contains("substrate")) cfg.substrate = detail::string_value(m["substrate"], "materials.substrate");
    if (m.contains("film")) cfg.film = detail::string_value(m["film"], "materials.film");
  }

  if (doc.contains("geometry")) {
    const auto& g = doc["geometry"];
    check_keys(g, "geometry", {"preset", "b", "b_p", "a", "transducer", "overtone"});
    if (g.contains("preset")) {
      cfg.geometry_name = detail::string_value(g["preset"], "geometry.preset");
      cfg.geometry = builtin_geometry(cfg.geometry_name);
    } else {
      if (!g.contains("b") || !g.contains("b_p") || !g.contains("a")) {
        throw ValidationError("config: geometry without 'preset' needs 'b', 'b_p' and 'a'");
      }
      cfg.geometry_name = "custom";
      cfg.geometry = emission::DeviceGeometry{};
    }
    if (g.contains("b")) cfg.geometry.b = detail::positive_number(g["b"], "geometry.b");
    if (g.contains("b_p")) cfg.geometry.b_p = detail::positive_number(g["b_p"], "geometry.b_p");
    if (g.contains("a")) cfg.geometry.a = detail::positive_number(g["a"], "geometry.a");
    if (g.contains("overtone")) {
      if (!g["overtone"].is_number_integer() || g["overtone"].get<long long>() <= 0) {
        throw ValidationError("config: 'geometry.overtone' must be a positive integer");
      }
      cfg.geometry.overtone = static_cast<int>(g["overtone"].get<long long>());
    }
    if (g.contains("transducer")) {
      const auto& t = g["transducer"];
      check_keys(t, "geometry.transducer", {"type", "z0", "r"});
      if (!t.contains("type")) throw ValidationError("config: 'geometry.transducer.type' is required");
      const std::string type = detail::string_value(t["type"], "geometry.transducer.type");
      if (type == "flat") {
        if (t.contains("z0") || t.contains("r")) throw ValidationError("config: flat transducer takes no z0 or r");
        cfg.geometry.transducer = emission::Flat{};
      } else if (type == "dome" || type == "cylinder") {
        if (!t.contains("z0") || !t.contains("r")) throw ValidationError("config: " + type + " transducer needs z0 and r");
        const double z0 = detail::positive_number(t["z0"], "geometry.transducer.z0");
        const double r = detail::positive_number(t["r"], "geometry.transducer.r");
        if (type == "dome") {
          cfg.geometry.transducer = emission::Dome{z0, r};
        } else {
          cfg.geometry.transducer = emission::Cylinder{z0, r};
        }
      } else {
        throw ValidationError("config: transducer type must be flat, dome or cylinder");
      }
    }
  }
  cfg.geometry.validate();

  if (doc.contains("field")) {
    const auto& f = doc["field"];
    check_keys(f, "field", {"type", "dir", "ez", "radius"});
    if (!f.contains("type")) throw ValidationError("config: 'field.type' is required");
    const std::string type = detail::string_value(f["type"], "field.type");
    if (type == "grid") {
      if (f.contains("ez") || f.contains("radius")) throw ValidationError("config: grid field takes only 'dir'");
      cfg.field.kind = FieldSource::Kind::kGrid;
      if (f.contains("dir")) {
        std::filesystem::path p = detail::string_value(f["dir"], "field.dir");
        cfg.field.dir = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
      }
    } else if (type == "disk") {
      if (f.contains("dir")) throw ValidationError("config: disk field takes 'ez' and 'radius', not 'dir'");
      if (!f.contains("ez") || !f.contains("radius")) throw ValidationError("config: disk field needs 'ez' and 'radius'");
      cfg.field.kind = FieldSource::Kind::kDisk;
      cfg.field.ez = detail::positive_number(f["ez"], "field.ez");
      cfg.field.radius = detail::positive_number(f["radius"], "field.radius");
    } else {
      throw ValidationError("config: field type must be grid or disk");
    }
  }

  if (doc.contains("overrides")) {
    const auto& o = doc["overrides"];
    check_keys(o, "overrides", {"e33", "e15", "v_perp"});
    if (o.contains("e33")) cfg.overrides.e33 = detail::positive_number(o["e33"], "overrides.e33");
    if (o.contains("e15")) cfg.overrides.e15 = detail::finite_number(o["e15"], "overrides.e15");
    if (o.contains("v_perp")) cfg.overrides.v_perp = detail::positive_number(o["v_perp"], "overrides.v_perp");
  }
  return cfg;
}

inline DeviceConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config " + path.string() + ": " + e.what());
  }
  return parse_config(doc, path.parent_path());
}

/** Preset name, or a path to a preset file when the argument ends in .json. */
inline materials::MaterialTensorSet resolve_material(const std::string& name) {
  if (name.size() > 5 && name.substr(name.size() - 5) == ".json") return materials::load_material_file(name);
  return materials::load_preset(name);
}

inline emission::AcousticMedium resolve_medium(const DeviceConfig& cfg) {
  auto m = emission::make_medium(resolve_material(cfg.substrate), resolve_material(cfg.film));
  if (cfg.overrides.e33) m.e33 = *cfg.overrides.e33;
  if (cfg.overrides.e15) m.e15 = *cfg.overrides.e15;
  if (cfg.overrides.v_perp) m.v_perp = *cfg.overrides.v_perp;
  m.validate();
  return m;
}

inline fields::FieldProfile resolve_field(const DeviceConfig& cfg) {
  if (cfg.field.kind == FieldSource::Kind::kDisk) {
    fields::UniformDisk d{cfg.field.ez, cfg.field.radius};
    d.validate();
    return d;
  }
  return fields::read_field_map_dir(cfg.field.dir.empty() ? fields::default_field_directory() : cfg.field.dir);
}

inline std::string field_description(const DeviceConfig& cfg) {
  if (cfg.field.kind == FieldSource::Kind::kDisk) return "disk(ez=" + fmt(cfg.field.ez) + ", radius=" + fmt(cfg.field.radius) + ")";
  return cfg.field.dir.empty() ? std::string("reference-grid") : "grid:" + cfg.field.dir.filename().string();
}

/** Squared-field integral, zero for components the profile does not carry. */
inline double field_integral_or_zero(const fields::FieldProfile& profile, fields::Component c) {
  if (std::holds_alternative<fields::UniformDisk>(profile)) {
    return c == fields::Component::Z ? fields::squared_field_integral(profile, c) : 0.0;
  }
  const auto& grid = std::get<fields::SampledGrid>(profile);
  return grid.has(c) ? fields::squared_field_integral(profile, c) : 0.0;
}

}  // namespace phonoscope::cli
