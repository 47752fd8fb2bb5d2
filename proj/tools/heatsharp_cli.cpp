#include <iostream>

#include "heatsharp/cli.hpp"

int main(int argc, char** argv) {
    return heatsharp::cli::run(argc, argv, std::cout, std::cerr);
}
