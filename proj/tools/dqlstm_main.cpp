#include <iostream>

#include "dqlstm/cli.hpp"

int main(int argc, char** argv) { return dqlstm::run_cli(argc, argv, std::cout, std::cerr); }
