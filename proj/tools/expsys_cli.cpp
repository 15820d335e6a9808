#include <iostream>

#include "expsys/cli/app.hpp"

int main(int argc, char** argv) { return expsys::cli::run(argc, argv, std::cout, std::cerr); }
