#include <iostream>
#include <string>
#include <vector>

#include "s2gd/cli.hpp"

int main(int argc, char** argv) {
  return s2gd::run_cli(std::vector<std::string>(argv + 1, argv + argc),
                       std::cout, std::cerr);
}
