#include <iostream>

#include "jetfol/cli.hpp"

int main(int argc, char** argv) { return jetfol::run_cli(argc, argv, std::cout, std::cerr); }
