#include <iostream>
#include <string>
#include <vector>

#include "binfit_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return binfit::cli::run(args, std::cout, std::cerr);
}
