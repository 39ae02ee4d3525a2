#include <iostream>

#include "wavespeed/cli.hpp"

int main(int argc, char** argv) { return wavespeed::run_cli(argc, argv, std::cout, std::cerr); }
