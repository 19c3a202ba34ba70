#include "singlim/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return singlim::run_command(argc, argv, std::cout, std::cerr); }
