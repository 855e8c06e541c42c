#include <iostream>
#include <string>
#include <vector>

#include "occo/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return occo::run_cli(args, std::cout, std::cerr);
}
