#include <iostream>
#include <string>
#include <vector>

#include "dsair/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return dsair::cli::run_cli(args, std::cout, std::cerr);
}
