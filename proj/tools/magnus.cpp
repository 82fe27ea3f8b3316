#include <iostream>

#include "magnus/cli.hpp"

int main(int argc, char** argv) { return magnus::cli::run(argc, argv, std::cout, std::cerr); }
