#include <iostream>
#include <string>
#include <vector>

#include "cvswap/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return cvswap::cli::run(args, std::cout, std::cerr);
}
