#include <iostream>

#include "pddlforge/cli/commands.hpp"

int main(int argc, char** argv) { return pddlforge::cli::run(argc, argv, std::cout, std::cerr); }
