#include <iostream>

#include "hypervirial/cli/commands.hpp"

int main(int argc, char** argv) {
  return hypervirial::cli::run(argc, argv, std::cout, std::cerr);
}
