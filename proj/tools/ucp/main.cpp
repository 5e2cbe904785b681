#include <iostream>

#include "ucp/cli.hpp"

int main(int argc, char** argv) { return ucp::cli::run(argc, argv, std::cout, std::cerr); }
