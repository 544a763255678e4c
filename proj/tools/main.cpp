#include <iostream>
#include <string>
#include <vector>

#include "frisch/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return frisch::run(args, std::cout, std::cerr);
}
