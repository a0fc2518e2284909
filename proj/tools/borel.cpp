#include <borel/cli.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    return borel::cli::run_cli(argc, argv, std::cout, std::cerr);
}
