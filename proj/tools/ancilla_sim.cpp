// ancilla_sim.cpp — command-line entry point

#include "ancilla/commands.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return ancilla::cli::run(argc, argv, std::cout, std::cerr);
}
