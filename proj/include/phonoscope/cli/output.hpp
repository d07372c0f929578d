#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "phonoscope/core/error.hpp"

namespace phonoscope::cli {

/** Fixed 9-significant-digit rendering used for every emitted number. */
inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline double round9(double v) { return std::strtod(fmt(v).c_str(), nullptr); }

/** Rounds every floating-point number in a JSON document to 9 significant digits. */
inline void round_json(nlohmann::json& j) {
  if (j.is_number_float()) {
    j = round9(j.get<double>());
  } else if (j.is_structured()) {
    for (auto& v : j) round_json(v);
  }
}

/**
 * CSV document: '#' comment lines with the run parameters, a column header,
 * then rows. Parameters keep insertion order.
 */
class CsvWriter {
 public:
  CsvWriter(std::string command, std::vector<std::string> columns)
      : command_(std::move(command)), columns_(std::move(columns)) {}

  void param(const std::string& key, const std::string& value) { params_.emplace_back(key, value); }
  void param(const std::string& key, double value) { param(key, fmt(value)); }
  void param(const std::string& key, int value) { param(key, std::to_string(value)); }
  void param(const std::string& key, std::size_t value) { param(key, std::to_string(value)); }
  void note(const std::string& text) { notes_.push_back(text); }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size()) throw Error("internal: CSV row width mismatch");
    rows_.push_back(cells);
  }

  std::string str() const {
    std::ostringstream out;
    out << "# phonoscope " << command_ << "\n";
    for (const auto& [k, v] : params_) out << "# " << k << " = " << v << "\n";
    for (const auto& n : notes_) out << "# note: " << n << "\n";
    write_line(out, columns_);
    for (const auto& r : rows_) write_line(out, r);
    return out.str();
  }

 private:
  static void write_line(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << "\n";
  }

  std::string command_;
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> params_;
  std::vector<std::string> notes_;
  std::vector<std::vector<std::string>> rows_;
};

inline std::string json_text(nlohmann::json j) {
  round_json(j);
  return j.dump(2) + "\n";
}

/** Writes the finished document to `path`, or to standard output when the path is empty. */
inline void emit(const std::string& text, const std::filesystem::path& path) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write output file " + path.string());
  out << text;
  if (!out) throw ValidationError("failed writing output file " + path.string());
}

}  // namespace phonoscope::cli
