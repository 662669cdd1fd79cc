#include <iostream>

#include "hrsurf/cli.hpp"

int main(int argc, char **argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return hrsurf::cli::run(args, std::cout, std::cerr);
}
