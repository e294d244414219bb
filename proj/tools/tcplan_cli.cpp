#include <iostream>
#include <string>
#include <vector>

#include "tcplan/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tcplan::run_cli(args, std::cout, std::cerr);
}
