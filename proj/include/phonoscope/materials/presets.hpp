#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "phonoscope/materials/tensors.hpp"

namespace phonoscope::materials {

namespace detail {

template <std::size_t R, std::size_t C>
Matrix<R, C> matrix_from_json(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array()) throw ValidationError(what + ": expected an array of numbers");
  std::vector<double> values;
  values.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw ValidationError(what + ": expected an array of numbers");
    values.push_back(v.get<double>());
  }
  return Matrix<R, C>::from_row_major(values, what);
}

}  // namespace detail

/** Builds a material from preset JSON (keys rho, c, optional d, e, eps, name). */
inline MaterialTensorSet material_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("material preset must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "name" && key != "rho" && key != "c" && key != "d" && key != "e" && key != "eps") {
      throw ValidationError("material preset: unknown key '" + key + "'");
    }
  }
  if (!j.contains("rho") || !j.contains("c")) throw ValidationError("material preset needs 'rho' and 'c'");
  MaterialTensorSet m;
  m.name = j.value("name", std::string("unnamed"));
  if (!j["rho"].is_number()) throw ValidationError("material preset: 'rho' must be a number");
  m.rho = j["rho"].get<double>();
  m.c = detail::matrix_from_json<6, 6>(j["c"], m.name + ".c");
  if (j.contains("d")) m.d = detail::matrix_from_json<3, 6>(j["d"], m.name + ".d");
  if (j.contains("e")) m.e = detail::matrix_from_json<3, 6>(j["e"], m.name + ".e");
  if (j.contains("eps")) m.eps = detail::matrix_from_json<3, 3>(j["eps"], m.name + ".eps");
  m.validate();
  return m;
}

inline MaterialTensorSet load_material_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open material file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError("malformed material file " + path.string() + ": " + ex.what());
  }
  return material_from_json(j);
}

/** PHONOSCOPE_PRESET_DIR if set, otherwise the directory baked in at build time. */
inline std::filesystem::path preset_directory() {
  if (const char* env = std::getenv("PHONOSCOPE_PRESET_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
#ifdef PHONOSCOPE_DEFAULT_PRESET_DIR
  return PHONOSCOPE_DEFAULT_PRESET_DIR;
#else
  return "data/materials";
#endif
}

/** Loads a named preset ("sapphire", "aln", ...) from the preset directory. */
inline MaterialTensorSet load_preset(const std::string& name) {
  const auto path = preset_directory() / (name + ".json");
  if (!std::filesystem::exists(path)) throw ValidationError("unknown material preset '" + name + "'");
  return load_material_file(path);
}

}  // namespace phonoscope::materials
