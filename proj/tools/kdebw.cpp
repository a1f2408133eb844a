#include <iostream>

#include "kdebw/cli.hpp"

int main(int argc, char** argv) { return kdebw::cli::run_cli(argc, argv, std::cout, std::cerr); }
