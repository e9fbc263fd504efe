#include <iostream>

#include "coopsense/cli.hpp"

int main(int argc, char** argv) { return coopsense::run_cli(argc, argv, std::cout, std::cerr); }
