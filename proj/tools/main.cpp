#include <iostream>

#include "tdabc/cli.hpp"

int main(int argc, char** argv) { return tdabc::run_cli(argc, argv, std::cout, std::cerr); }
