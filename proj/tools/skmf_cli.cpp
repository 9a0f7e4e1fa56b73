#include "skmf/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return skmf::cli::run(argc, argv, std::cout, std::cerr); }
