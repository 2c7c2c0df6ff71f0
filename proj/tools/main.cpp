#include <iostream>

#include "dirac_gap/cli.hpp"

int main(int argc, char** argv) {
  dirac_gap::cli::configure_logging();
  return dirac_gap::cli::run(argc, argv, std::cout, std::cerr);
}
