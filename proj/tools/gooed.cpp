#include <string>
#include <vector>

#include "gooed/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gooed::cli::run_cli(args);
}
