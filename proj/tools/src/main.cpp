#include <iostream>

#include "mixbound/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty() || args[0] == "--help" || args[0] == "-h") {
    std::cout << "usage: mixbound <command> [files] [--config FILE] [--seed N] [--output PATH] [--<param> VALUE]\n"
                 "commands: w1, l1, bounds verify, bounds fuzz, pde check, dual-witness demo,\n"
                 "          posterior run, posterior rates, kernels probe\n";
    return args.empty() ? 2 : 0;
  }
  return mixbound::cli::run(args, std::cout, std::cerr);
}
