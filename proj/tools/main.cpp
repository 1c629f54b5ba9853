#include "polycover/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return polycover::cli::run(argc, argv, std::cout, std::cerr); }
