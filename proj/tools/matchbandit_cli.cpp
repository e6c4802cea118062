#include <iostream>

#include "matchbandit/cli.hpp"

int main(int argc, char** argv) { return matchbandit::run_cli(argc, argv, std::cout, std::cerr); }
