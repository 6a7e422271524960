#include <iostream>

#include "oneforms/cli.hpp"

int main(int argc, char** argv) {
  return oneforms::cli::run(argc, argv, std::cout, std::cerr);
}
