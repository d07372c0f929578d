#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "phonoscope/fields/profile.hpp"

namespace phonoscope::fields {

/**
 * Field-map CSV: a header line "# nx, ny, dx_m, dy_m, component" carrying
 * the values, then ny rows of nx comma-separated numbers.
 */
inline void write_field_map(const SampledGrid& grid, Component c, const std::filesystem::path& path) {
  const auto& v = grid.component(c);
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write field map " + path.string());
  char buf[64];
  out << "# " << grid.nx << ", " << grid.ny << ", ";
  std::snprintf(buf, sizeof buf, "%.17g, %.17g", grid.dx, grid.dy);
  out << buf << ", " << component_name(c) << "\n";
  for (std::size_t j = 0; j < grid.ny; ++j) {
    for (std::size_t i = 0; i < grid.nx; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", v[j * grid.nx + i]);
      if (i) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return out;
}

inline double parse_number(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(where + ": cannot parse number '" + s + "'");
  }
}

}  // namespace detail

/** Reads one field-map file; the returned grid carries only the named component. */
inline SampledGrid read_field_map(const std::filesystem::path& path, Component* which = nullptr) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open field map " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.empty() || line[0] != '#') {
    throw ValidationError(path.string() + ": missing '# nx, ny, dx_m, dy_m, component' header");
  }
  const auto head = detail::split_csv(line.substr(1));
  if (head.size() != 5) throw ValidationError(path.string() + ": header needs 5 fields");
  SampledGrid grid;
  const double nx = detail::parse_number(head[0], path.string());
  const double ny = detail::parse_number(head[1], path.string());
  if (nx < 2 || ny < 2 || nx != std::floor(nx) || ny != std::floor(ny) || nx * ny > 1e8) {
    throw ValidationError(path.string() + ": bad grid dimensions");
  }
  grid.nx = static_cast<std::size_t>(nx);
  grid.ny = static_cast<std::size_t>(ny);
  grid.dx = detail::parse_number(head[2], path.string());
  grid.dy = detail::parse_number(head[3], path.string());
  const Component c = parse_component(head[4]);
  if (which) *which = c;
  auto& v = grid.values[static_cast<int>(c)];
  v.reserve(grid.nx * grid.ny);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = detail::split_csv(line);
    if (cells.size() != grid.nx) {
      throw ValidationError(path.string() + ": row " + std::to_string(rows + 1) + " has " +
                            std::to_string(cells.size()) + " values, expected " + std::to_string(grid.nx));
    }
    for (std::size_t col = 0; col < cells.size(); ++col) {
      const std::string where = path.string() + ": row " + std::to_string(rows + 1) + ", column " + std::to_string(col + 1);
      const double value = detail::parse_number(cells[col], where);
      if (!std::isfinite(value)) throw ValidationError(where + ": non-finite value '" + cells[col] + "'");
      v.push_back(value);
    }
    ++rows;
  }
  if (rows != grid.ny) {
    throw ValidationError(path.string() + ": expected " + std::to_string(grid.ny) + " rows, got " + std::to_string(rows));
  }
  grid.validate();
  return grid;
}

/** Reads Ex.csv, Ey.csv, Ez.csv (whichever exist, Ez required) into one grid. */
inline SampledGrid read_field_map_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ValidationError("field map directory not found: " + dir.string());
  const auto ez_path = dir / "Ez.csv";
  if (!std::filesystem::exists(ez_path)) throw ValidationError("field map directory lacks Ez.csv: " + dir.string());
  SampledGrid grid = read_field_map(ez_path);
  for (const char* name : {"Ex.csv", "Ey.csv"}) {
    const auto p = dir / name;
    if (!std::filesystem::exists(p)) continue;
    Component c;
    SampledGrid g = read_field_map(p, &c);
    if (g.nx != grid.nx || g.ny != grid.ny || g.dx != grid.dx || g.dy != grid.dy) {
      throw ValidationError(p.string() + ": grid does not match Ez.csv");
    }
    grid.values[static_cast<int>(c)] = std::move(g.values[static_cast<int>(c)]);
  }
  return grid;
}

inline void write_field_map_dir(const SampledGrid& grid, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (Component c : {Component::X, Component::Y, Component::Z})
    if (grid.has(c)) write_field_map(grid, c, dir / (component_name(c) + ".csv"));
}

inline std::filesystem::path default_field_directory() {
#ifdef PHONOSCOPE_DEFAULT_FIELD_DIR
  return PHONOSCOPE_DEFAULT_FIELD_DIR;
#else
  return "data/field_reference";
#endif
}

}  // namespace phonoscope::fields
