#include <iostream>

#include "rosctl/cli.hpp"

int main(int argc, char** argv) { return rosctl::cli::run(argc, argv, std::cout, std::cerr); }
