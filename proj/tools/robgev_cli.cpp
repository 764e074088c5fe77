#include <iostream>

#include "robgev/cli.hpp"

int main(int argc, char** argv) { return robgev::cli::run(argc, argv, std::cout, std::cerr); }
