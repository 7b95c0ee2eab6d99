#include <iostream>
#include <string>
#include <vector>

#include "loclab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return loclab::dispatch(args, std::cout, std::cerr);
}
