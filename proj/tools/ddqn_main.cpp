#include <string>
#include <vector>

#include "ddqn/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ddqn::cli::run(std::move(args));
}
