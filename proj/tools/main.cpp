#include <iostream>

#include "opm/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return opm::run_cli(args, std::cout, std::cerr);
}
