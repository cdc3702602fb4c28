#include <iostream>

#include "mfgcanon_cli/workflows.hpp"

int main(int argc, char** argv) { return mfgcanon::cli::run(argc, argv, std::cout, std::cerr); }
