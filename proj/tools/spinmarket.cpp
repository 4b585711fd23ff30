#include <iostream>

#include "spinmarket/cli.hpp"

int main(int argc, char** argv) { return spinmarket::cli::run(argc, argv, std::cout, std::cerr); }
