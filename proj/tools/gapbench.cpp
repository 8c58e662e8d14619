#include "gap/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return gap::cli_main(argc, argv, std::cout, std::cerr); }
