#include <cstdint>
#include <cstdlib>
#include <iostream>

#include "szego/lab.hpp"

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1;
  const auto report = szego::lab::acceptance_suite(seed, false);
  for (const auto& v : report.verdicts) std::cout << szego::lab::verdict_line(v) << '\n';
  return report.all_pass() ? 0 : 1;
}
