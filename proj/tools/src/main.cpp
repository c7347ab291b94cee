#include <iostream>

#include "khier_cli/commands.hpp"

int main(int argc, char** argv) { return khier::cli::run(argc, argv, std::cout, std::cerr); }
