#include <iostream>

#include "conic_lab/cli.hpp"

int main(int argc, char** argv) { return conic_lab::cli::run(argc, argv, std::cout, std::cerr); }
