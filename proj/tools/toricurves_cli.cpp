#include <iostream>

#include "toricurves/cli.hpp"

int main(int argc, char** argv) { return toricurves::run_cli(argc, argv, std::cout, std::cerr); }
