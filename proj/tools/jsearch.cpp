#include <iostream>

#include "jsearch/cli.hpp"

int main(int argc, char** argv) {
  return jsearch::cli::run(argc, argv, std::cout, std::cerr);
}
