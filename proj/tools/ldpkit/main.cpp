#include <iostream>

#include "ldp/cli.hpp"

int main(int argc, char** argv) { return ldp::run_cli(argc, argv, std::cout, std::cerr); }
