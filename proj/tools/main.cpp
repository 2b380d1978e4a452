#include <iostream>
#include <string>
#include <vector>

#include "codon/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return codon::dispatch(args, std::cout, std::cerr);
}
