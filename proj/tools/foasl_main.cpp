#include <iostream>
#include <string>
#include <vector>

#include "foasl/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return foasl::run_cli(args, std::cout, std::cerr);
}
