#include <iostream>
#include <string>
#include <vector>

#include "gnetm/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return gnetm::cli::dispatch(std::move(args), std::cout, std::cerr);
}
