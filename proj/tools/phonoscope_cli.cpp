#include "phonoscope/cli/app.hpp"

int main(int argc, char** argv) { return phonoscope::cli::run(argc, argv); }
