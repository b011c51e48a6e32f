#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace varjack {

// Exact in double up to n = 62 (values fit in uint64 and the identity sums
// we feed them into stay well below 2^53 for the dimensions in use);
// log-space beyond.
inline double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (k == 0 || k == n) return 1.0;
  if (n <= 62) {
    std::uint64_t num = 1;
    k = std::min(k, n - k);
    for (int i = 1; i <= k; ++i) {
      num = num * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return static_cast<double>(num);
  }
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                  std::lgamma(n - k + 1.0));
}

inline double factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial of negative");
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// (2m-1)!! = E Z^{2m} for standard normal Z
inline double odd_double_factorial(int m) {
  double f = 1.0;
  for (int i = 3; i <= m; i += 2) f *= i;
  return (m >= 1) ? f : 1.0;
}

// E Z^j for standard normal Z
inline double gaussian_moment(int j) {
  if (j % 2 == 1) return 0.0;
  return odd_double_factorial(j - 1);
}

// Beta integral over [0,1] of x^a (1-x)^b = a! b! / (a+b+1)!
inline double beta_integral(int a, int b) {
  return factorial(a) * factorial(b) / factorial(a + b + 1);
}

}  // namespace varjack
