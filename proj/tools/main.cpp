#include <iostream>

#include "pmcw/cli.hpp"

int main(int argc, char** argv)
{
    return pmcw::cli::run(argc, argv, std::cout, std::cerr);
}
