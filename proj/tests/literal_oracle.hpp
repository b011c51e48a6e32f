#pragma once

// Shared test-side oracles: literal permutation-average evaluation of the
// decomposition quantities by brute enumeration, plus small random binary
// instances.  Deliberately independent of the engine's conditional-mean path.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "varjack/builtins.hpp"
#include "varjack/exact.hpp"

namespace testutil {

using namespace varjack;


// Literal permutation-average oracle on binary spaces: every expectation is a
// plain double/triple enumeration over configurations, with no conditioning
// trick, and the average runs over all n! permutations explicitly.
struct BinaryOracle {
  int n;
  std::vector<double> vals, prob;

  BinaryOracle(const ProductSpace& space, const CoordFunction& f)
      : n(space.dimension()) {
    const std::size_t total = std::size_t{1} << n;
    vals.resize(total);
    prob.resize(total);
    for (std::size_t s = 0; s < total; ++s) {
      Configuration c(n);
      double p = 1.0;
      for (int i = 0; i < n; ++i) {
        c[i] = (s >> i) & 1;
        p *= space.coords[i].probs[c[i]];
      }
      vals[s] = f(c);
      prob[s] = p;
    }
  }

  static std::uint32_t combine(std::uint32_t x, std::uint32_t y,
                               std::uint32_t mask) {
    return (x & ~mask) | (y & mask);
  }

  // E[S * S^mask] by double enumeration
  double pair_corr(std::uint32_t mask) const {
    const std::size_t total = vals.size();
    double acc = 0.0;
    for (std::uint32_t x = 0; x < total; ++x)
      for (std::uint32_t y = 0; y < total; ++y)
        acc += prob[x] * prob[y] * vals[x] * vals[combine(x, y, mask)];
    return acc;
  }

  // E[(Delta_A S)(Delta_A S)^{gamma}] by triple enumeration
  double delta_pair(std::uint32_t A, std::uint32_t gamma) const {
    const std::size_t total = vals.size();
    auto delta = [&](std::uint32_t x, std::uint32_t y) {
      double acc = 0.0;
      std::uint32_t sub = A;
      while (true) {
        const double sign = (__builtin_popcount(sub) & 1) ? -1.0 : 1.0;
        acc += sign * vals[combine(x, y, sub)];
        if (sub == 0) break;
        sub = (sub - 1) & A;
      }
      return acc;
    };
    double acc = 0.0;
    for (std::uint32_t x = 0; x < total; ++x)
      for (std::uint32_t y = 0; y < total; ++y) {
        const double pxy = prob[x] * prob[y];
        if (pxy == 0.0) continue;
        const double first = delta(x, y);
        if (first == 0.0) continue;
        for (std::uint32_t z = 0; z < total; ++z)
          acc += pxy * prob[z] * first * delta(combine(x, z, gamma), y);
      }
    return acc;
  }

  // B_k per the permutation-average definition
  std::vector<double> literal_B() const {
    std::vector<double> corr(vals.size());
    for (std::uint32_t m = 0; m < vals.size(); ++m) corr[m] = pair_corr(m);
    std::vector<double> B(n, 0.0);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double count = 0.0;
    do {
      std::uint32_t prefix = 0;
      for (int k = 1; k <= n; ++k) {
        const std::uint32_t longer = prefix | (1u << perm[k - 1]);
        B[k - 1] += corr[prefix] - corr[longer];
        prefix = longer;
      }
      count += 1.0;
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (double& b : B) b /= count;
    return B;
  }

  // D^l B_k per the permutation-average definition
  std::vector<std::vector<double>> literal_DB() const {
    // cache the triple-enumeration values per disjoint (A, gamma)
    const std::uint32_t full = (1u << n) - 1;
    std::vector<std::vector<double>> cache(full + 1);
    for (std::uint32_t A = 1; A <= full; ++A) {
      cache[A].assign(full + 1, 0.0);
      std::uint32_t g = full & ~A;
      while (true) {
        cache[A][g] = delta_pair(A, g);
        if (g == 0) break;
        g = (g - 1) & (full & ~A);
      }
    }
    std::vector<std::vector<double>> DB(n);
    for (int l = 0; l < n; ++l) DB[l].assign(n - l, 0.0);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double count = 0.0;
    do {
      for (int l = 0; l < n; ++l) {
        std::uint32_t A = 0;
        for (int t = 0; t <= l; ++t) A |= 1u << perm[t];
        std::uint32_t gamma = 0;
        for (int k = 1; k <= n - l; ++k) {
          if (k >= 2) gamma |= 1u << perm[l + k - 1];
          DB[l][k - 1] += cache[A][gamma] / std::pow(2.0, l + 1);
        }
      }
      count += 1.0;
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (auto& row : DB)
      for (double& v : row) v /= count;
    return DB;
  }
};

ProductSpace random_binary_space(int n, RandomSource& rng) {
  std::vector<FiniteDistribution> coords;
  for (int i = 0; i < n; ++i) {
    const double p = 0.15 + 0.7 * rng.uniform();
    coords.push_back(FiniteDistribution::bernoulli(p));
  }
  return ProductSpace(std::move(coords));
}

CoordFunction random_multilinear(int n, RandomSource& rng) {
  std::map<SubsetMask, double> coeffs;
  const SubsetMask full = (1u << n) - 1;
  for (int t = 0; t < 2 * n; ++t)
    coeffs[static_cast<SubsetMask>(rng.uniform_index(full + 1))] +=
        2.0 * rng.uniform() - 1.0;
  return make_multilinear(n, coeffs, ValueTable::identity(2));
}


}  // namespace testutil
