#include <iostream>

#include "dzeta/cli.hpp"

int main(int argc, char** argv) { return dzeta::run_command(argc, argv, std::cout, std::cerr); }
