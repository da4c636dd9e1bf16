// Runs the fourteen acceptance criteria and prints one line per criterion.
// Usage: acceptance [criterion-number ...]

#include <cstdlib>
#include <iostream>
#include <set>
#include <string>
#include <thread>

#include "klyshko/verification.hpp"

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const std::size_t workers = std::max(1U, std::thread::hardware_concurrency());

  int failed = 0, ran = 0;
  for (const auto& c : klyshko::verify::criteria()) {
    if (!only.empty() && !only.count(c.number)) continue;
    const auto r = klyshko::verify::run(c, workers);
    std::cout << klyshko::verify::format_line(r) << std::endl;
    ++ran;
    if (!r.pass) ++failed;
  }
  std::cout << (ran - failed) << "/" << ran << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
