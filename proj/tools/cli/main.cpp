#include <iostream>

#include "cli/run.hpp"

int main(int argc, char** argv) {
  try {
    auto spec = cpflow::cli::parse_args(argc, argv, std::cout);
    if (!spec) return cpflow::cli::kExitOk;
    return cpflow::cli::run(*spec, std::cerr);
  } catch (const cpflow::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cpflow::cli::kExitInputError;
  }
}
