#include <iostream>
#include <string>
#include <vector>

#include "unifed/app.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return unifed::app::run(args, std::cin, std::cout, std::cerr);
}
