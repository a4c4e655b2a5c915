#include <iostream>
#include <string>
#include <vector>

#include "predbound/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return predbound::cli::run(args, std::cout, std::cerr);
}
