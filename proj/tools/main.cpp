#include <iostream>

#include "ctfactor/cli.hpp"

int main(int argc, char** argv) { return ctfactor::cli::run(argc, argv, std::cout, std::cerr); }
