#include <iostream>
#include <string>
#include <vector>

#include "maxdist/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return maxdist::run_cli(args, std::cout, std::cerr);
}
