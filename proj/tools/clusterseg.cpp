#include <string>
#include <vector>

#include "clusterseg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return clusterseg::cli::run(args);
}
