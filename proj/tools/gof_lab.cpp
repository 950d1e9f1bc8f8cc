#include <goflab/cli/commands.hpp>

#include <iostream>

int main(int argc, char** argv) {
  return goflab::cli::run_cli(argc, argv, std::cout, std::cerr);
}
