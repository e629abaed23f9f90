#include <iostream>

#include "diocap/cli.hpp"

int main(int argc, char** argv) { return diocap::cli::run(argc, argv, std::cout, std::cerr); }
