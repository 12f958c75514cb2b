#include <iostream>
#include <string>
#include <vector>

#include "lifts/runner.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lifts::run(args, std::cout, std::cerr);
}
