#include <iostream>

#include "urbanlra/cli.hpp"

int main(int argc, char** argv) {
  return urbanlra::cli::run(argc, argv, std::cout, std::cerr);
}
