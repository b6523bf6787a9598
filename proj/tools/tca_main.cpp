#include <iostream>

#include "tca/cli.hpp"

int main(int argc, char** argv) { return tca::run_cli(argc, argv, std::cout, std::cerr); }
