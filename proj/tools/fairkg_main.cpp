#include <iostream>

#include "fairkg/cli.hpp"

int main(int argc, char** argv) { return fairkg::cli::run(argc, argv, std::cout, std::cerr); }
