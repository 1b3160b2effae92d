#include <iostream>
#include <string>
#include <vector>

#include "pipemap/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return pipemap::cli::run(args, std::cout, std::cerr);
}
