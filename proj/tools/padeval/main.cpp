#include <iostream>
#include <string>
#include <vector>

#include "padeval/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return padeval::cli::run(args, std::cout, std::cerr);
}
