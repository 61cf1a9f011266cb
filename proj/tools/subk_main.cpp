#include <iostream>

#include "subk/cli.hpp"

int main(int argc, char** argv) { return subk::cli::run(argc, argv, std::cout, std::cerr); }
