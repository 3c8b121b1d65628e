#include <iostream>
#include <string>
#include <vector>

#include "thermoshift/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return thermoshift::cli::run(args, std::cout, std::cerr);
}
