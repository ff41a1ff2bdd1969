#include <iostream>

#include "lds4/cli.hpp"

int main(int argc, char** argv) { return lds4::cli::run(argc, argv, std::cout, std::cerr); }
