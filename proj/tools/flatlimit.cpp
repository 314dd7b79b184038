#include <iostream>

#include "flatlimit/cli.hpp"

int main(int argc, char** argv) { return flatlimit::cli::run(argc, argv, std::cout, std::cerr); }
