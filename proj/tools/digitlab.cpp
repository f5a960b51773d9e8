#include <iostream>

#include "digitlab/cli.hpp"

int main(int argc, char** argv) {
    return digitlab::cli::main(argc, argv, std::cout, std::cerr);
}
