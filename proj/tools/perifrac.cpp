#include <iostream>

#include "perifrac/cli.hpp"

int main(int argc, char** argv) {
    return perifrac::run_cli(argc, argv, std::cout, std::cerr);
}
