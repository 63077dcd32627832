#include <iostream>

#include "msalg/cli/run.hpp"

int main(int argc, char** argv) {
  auto r = msalg::cli::run(std::vector<std::string>(argv + 1, argv + argc));
  std::cout << r.out;
  std::cerr << r.err;
  return r.status;
}
