#include <iostream>

#include "weave/cli/commands.hpp"

int main(int argc, char** argv) { return weave::cli::run_cli(argc, argv, std::cout, std::cerr); }
