#include <iostream>

#include "tdchan/cli.hpp"

int main(int argc, char** argv) { return tdchan::run_cli(argc, argv, std::cout, std::cerr); }
