#include <iostream>
#include <string>
#include <vector>

#include "twolevel/commands.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return twolevel::cli::run(args, std::cin, std::cout, std::cerr);
}
