#include "predmech/cli.hpp"

#include <iostream>

int main(int argc, char **argv)
{
  std::vector<std::string> args(argv + 1, argv + argc);
  return predmech::run_cli(args, std::cout, std::cerr);
}
