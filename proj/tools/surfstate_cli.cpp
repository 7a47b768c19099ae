#include <iostream>
#include <string>
#include <vector>

#include "surfstate/cli.hpp"

int main(int argc, char** argv) {
  return surfstate::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
