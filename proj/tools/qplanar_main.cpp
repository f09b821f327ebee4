#include <iostream>
#include <string>
#include <vector>

#include "qplanar/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qplanar::cli_main(args, std::cout, std::cerr);
}
