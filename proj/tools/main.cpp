#include <iostream>

#include "minclique/cli.hpp"

int main(int argc, char** argv) { return minclique::cli::run_cli(argc, argv, std::cout, std::cerr); }
