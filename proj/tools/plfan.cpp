#include <iostream>

#include "plfan/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return plfan::cli::run(args, std::cin, std::cout, std::cerr);
}
