#include <iostream>

#include "drazinkit/cli_app.hpp"

int main(int argc, char** argv) {
  return drazinkit::cli::run_cli(argc, argv, std::cout, std::cerr);
}
