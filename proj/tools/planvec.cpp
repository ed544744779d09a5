#include <iostream>
#include <string>
#include <vector>

#include "planvec/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return planvec::run_cli(args, std::cout, std::cerr);
}
