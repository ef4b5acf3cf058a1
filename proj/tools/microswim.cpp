#include "microswim/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return microswim::run_cli(argc, argv, std::cout, std::cerr); }
