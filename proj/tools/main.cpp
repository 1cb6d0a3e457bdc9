#include <iostream>

#include "opto_spring/cli.hpp"

int main(int argc, char** argv) {
    return opto_spring::run_cli(argc, argv, std::cout, std::cerr);
}
