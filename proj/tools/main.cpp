#include <iostream>
#include <string>
#include <vector>

#include "kgeckart/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return kgeckart::cli::run(args, std::cout, std::cerr);
}
