#include <iostream>

#include "qlwave/cli.hpp"

int main(int argc, char** argv) { return qlwave::cli_main(argc, argv, std::cout, std::cerr); }
