#include <iostream>
#include <string>
#include <vector>

#include "cvbft/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cvbft::cli::dispatch(args, std::cout, std::cerr);
}
