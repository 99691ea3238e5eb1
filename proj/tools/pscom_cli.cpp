#include <iostream>
#include <string>
#include <vector>

#include "pscom/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return pscom::cli::run(args, std::cout, std::cerr);
}
