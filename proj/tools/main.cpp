#include <iostream>
#include <string>
#include <vector>

#include "causal/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return causal::run_command(args, std::cout, std::cerr);
}
