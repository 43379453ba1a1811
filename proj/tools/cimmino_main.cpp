#include <iostream>

#include "cimmino/cli.hpp"

int main(int argc, char** argv) { return cimmino::run_cli(argc, argv, std::cout, std::cerr); }
