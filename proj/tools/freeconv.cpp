#include <iostream>

#include "freeconv/cli.hpp"

int main(int argc, char** argv)
{
    return freeconv::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
