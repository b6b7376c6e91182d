#include <iostream>

#include "smse/cli.hpp"

int main(int argc, char** argv) { return smse::run_cli(argc, argv, std::cout, std::cerr); }
