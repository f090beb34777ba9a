#include <iostream>

#include "rlp/cli.hpp"

int main(int argc, char** argv) {
  return rlp::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
