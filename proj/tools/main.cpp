#include <iostream>

#include "chainscan/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return chainscan::cli::run(args, std::cout, std::cerr);
}
