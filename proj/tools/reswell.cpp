#include <iostream>

#include "reswell/cli.hpp"

int main(int argc, char** argv) { return reswell::cli::run(argc, argv, std::cout, std::cerr); }
