#include <iostream>

#include "invmet/cli.hpp"

int main(int argc, char** argv) { return invmet::run(argc, argv, std::cout, std::cerr); }
