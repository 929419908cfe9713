#include <iostream>

#include "gibbscert/runner.hpp"

int main(int argc, char** argv) { return gibbscert::run_cli(argc, argv, std::cout, std::cerr); }
