#include <iostream>

#include "gapthermal/cli.hpp"

int main(int argc, char** argv) {
  return gapthermal::cli::run(argc, argv, std::cout, std::cerr);
}
