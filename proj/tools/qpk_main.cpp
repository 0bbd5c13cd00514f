#include <iostream>

#include "qpk/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return qpk::cli::run(args, std::cout, std::cerr, std::cin);
}
