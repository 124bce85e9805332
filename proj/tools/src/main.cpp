#include <iostream>

#include "mixssl_cli/commands.hpp"

int main(int argc, char** argv) { return mixssl::cli::run(argc, argv, std::cout, std::cerr); }
