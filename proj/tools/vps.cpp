#include <iostream>

#include "vps/cli/app.hpp"

int main(int argc, char** argv) { return vps::cli::run(argc, argv, std::cout, std::cerr); }
