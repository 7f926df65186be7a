#include <iostream>

#include "anchoralign/cli.hpp"

int main(int argc, char** argv) {
  return anchoralign::run_cli(argc, argv, std::cout, std::cerr);
}
