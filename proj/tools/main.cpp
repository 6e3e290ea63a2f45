#include <iostream>

#include "delocal/cli.hpp"

int main(int argc, char** argv) { return delocal::run_cli(argc, argv, std::cout, std::cerr); }
