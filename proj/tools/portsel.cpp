#include <iostream>

#include "portsel/cli.hpp"

int main(int argc, char** argv) { return portsel::run_cli(argc, argv, std::cout, std::cerr); }
