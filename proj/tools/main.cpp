#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return su11::cli::run(argc, argv, std::cout, std::cerr); }
