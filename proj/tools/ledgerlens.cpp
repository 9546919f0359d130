#include <iostream>

#include "ledgerlens/cli.hpp"

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    return ledgerlens::cli::run(argc, argv, std::cout, std::cerr);
}
