#include <iostream>

#include "qlearndyn/cli.hpp"

int main(int argc, char** argv) { return qlearndyn::run_cli(argc, argv, std::cout, std::cerr); }
