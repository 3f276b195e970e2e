#include <iostream>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  return telab::cli::run_command({argv + 1, argv + argc}, std::cout, std::cerr);
}
