#include <flatdual/cli.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    return flatdual::cli::run(argc, argv, std::cout, std::cerr);
}
