#include <iostream>

#include "nippaudit/cli.hpp"

int main(int argc, char** argv) { return nippaudit::cli_main(argc, argv, std::cout, std::cerr); }
