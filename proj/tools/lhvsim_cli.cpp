#include <iostream>

#include "lhvsim/cli.hpp"

int main(int argc, char** argv) { return lhvsim::cli_main(argc, argv, std::cout, std::cerr); }
