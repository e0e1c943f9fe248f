#include <iostream>

#include "mobius/cli.hpp"

int main(int argc, char** argv) { return mobius::cli::run(argc, argv, std::cout, std::cerr); }
