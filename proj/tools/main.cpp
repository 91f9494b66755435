#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return kwlab::cli::run(argc, argv, std::cout, std::cin); }
