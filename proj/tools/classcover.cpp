#include <iostream>
#include <string>
#include <vector>

#include "classcover/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return classcover::cli::run(std::move(args), std::cout, std::cerr);
}
