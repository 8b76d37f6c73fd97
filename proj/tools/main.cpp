#include <iostream>

#include "zol/cli.hpp"

int main(int argc, char** argv) { return zol::run_command(argc, argv, std::cout, std::cerr); }
