#include "riclab/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return riclab::cli::run(argc, argv, std::cout, std::cerr); }
