#include "cpsdrank/cli.hpp"

int main(int argc, char** argv) {
  return cpsdrank::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
