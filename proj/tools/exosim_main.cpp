#include <iostream>

#include "exosim/cli.hpp"

int main(int argc, char** argv) { return exosim::run_cli(argc, argv, std::cout, std::cerr); }
