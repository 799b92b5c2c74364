// One line per acceptance criterion; exits nonzero if any criterion fails.
#include <chrono>
#include <cstdio>
#include <iostream>

#include "btlab/verify.hpp"

int main() {
  using namespace btlab;
  int failed = 0;
  for (uint32_t n = 1; n <= 10; ++n) {
    const Check* c = nullptr;
    for (const auto& x : check_registry())
      if (x.criterion == n) c = &x;
    if (!c) {
      std::printf("criterion %2u FAIL (no check registered)\n", n);
      ++failed;
      continue;
    }
    auto t0 = std::chrono::steady_clock::now();
    auto r = run_check(*c);
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2u %s [%s] %s (%.2fs)\n", n, r.pass ? "PASS" : "FAIL", c->id.c_str(), r.detail.c_str(), s);
    std::fflush(stdout);
    failed += !r.pass;
  }
  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
