#include "bfree/app.hpp"

#include <chrono>
#include <iostream>

int main() {
  int failed = 0;
  for (int k = 1; k <= bfree::acceptance_count(); ++k) {
    auto t0 = std::chrono::steady_clock::now();
    auto r = bfree::acceptance_check(k);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << bfree::format_check(r) << " [" << secs << " s]" << std::endl;
    if (!r.pass) ++failed;
  }
  std::cout << (failed ? "acceptance: " + std::to_string(failed) + " failing" : std::string("acceptance: all passing"))
            << std::endl;
  return failed ? 1 : 0;
}
