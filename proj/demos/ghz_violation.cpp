// Violation of the Bell-Klyshko inequality by GHZ states and by the weighted
// family alpha|0..0> + beta|1..1>.

#include <cmath>
#include <cstdio>

#include "klyshko/bellop.hpp"
#include "klyshko/symstate.hpp"

int main() {
  using namespace klyshko;
  std::printf("%3s %14s %14s\n", "n", "<B_n>", "2^{(n+1)/2}");
  for (int n = 2; n <= 8; ++n)
    std::printf("%3d %14.10f %14.10f\n", n, bell_expectation(embed(ghz(n)), ghz_optimal_settings(n)), quantum_max(n));

  const double alpha = 0.6, beta = 0.8;
  std::printf("\nalpha=%.1f beta=%.1f\n%3s %12s %12s\n", alpha, beta, "n", "<B_n>/2", "2ab2^{(n-1)/2}");
  for (int n = 2; n <= 8; ++n) {
    const auto v = weighted_ghz_violation(n, alpha, beta);
    std::printf("%3d %12.8f %12.8f\n", n, v.factor, v.doubled_factor);
  }
}
