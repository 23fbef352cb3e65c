#include <iostream>

#include "layersep/cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return layersep::cli::main(argc, argv, std::cout, std::cerr);
}
