// Writes the synthetic reference field grid (Ex.csv, Ey.csv, Ez.csv).
#include <iostream>

#include "phonoscope/fields/field_map_io.hpp"
#include "phonoscope/fields/reference_field.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_reference_field <output-dir>\n";
    return 1;
  }
  try {
    phonoscope::fields::write_field_map_dir(phonoscope::fields::make_reference_field(), argv[1]);
  } catch (const std::exception& e) {
    std::cerr << "make_reference_field: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
