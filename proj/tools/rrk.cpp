#include <iostream>

#include "rrk/cli.hpp"

int main(int argc, char** argv) { return rrk::cli::run(argc, argv, std::cout, std::cerr); }
