#include <iostream>

#include "howde/cli.hpp"

int main(int argc, char** argv) { return howde::run_cli(argc, argv, std::cout, std::cerr); }
