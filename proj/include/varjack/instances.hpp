#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "varjack/builtins.hpp"
#include "varjack/model.hpp"
#include "varjack/rng.hpp"

namespace varjack {

// Randomized test instances shared by the identity suite and the `verify`
// subcommand: small product spaces with binary/ternary coordinates, dyadic or
// generic probabilities, and multilinear or LCS-type functions.
struct RandomInstance {
  ProductSpace space;
  CoordFunction f;
  bool exact = false;  // dyadic probabilities and integer-valued S
  std::string kind;
};

namespace detail {

inline FiniteDistribution random_coord(RandomSource& rng, bool dyadic) {
  const int support = 2 + static_cast<int>(rng.uniform_index(2));  // 2 or 3
  if (dyadic) {
    if (support == 2) {
      static const double choices[] = {0.25, 0.5, 0.75, 0.125};
      const double p = choices[rng.uniform_index(4)];
      return FiniteDistribution({0, 1}, {1.0 - p, p});
    }
    static const double triples[][3] = {
        {0.25, 0.25, 0.5}, {0.5, 0.25, 0.25}, {0.25, 0.5, 0.25},
        {0.125, 0.375, 0.5}};
    const auto& t = triples[rng.uniform_index(4)];
    return FiniteDistribution({0, 1, 2}, {t[0], t[1], t[2]});
  }
  std::vector<double> p(support);
  double total = 0.0;
  for (double& v : p) {
    v = 0.05 + rng.uniform();
    total += v;
  }
  for (double& v : p) v /= total;
  // renormalize exactly so validate() accepts the law
  double acc = 0.0;
  for (int i = 0; i + 1 < support; ++i) acc += p[i];
  p[support - 1] = 1.0 - acc;
  std::vector<int> atoms(support);
  for (int i = 0; i < support; ++i) atoms[i] = i;
  return FiniteDistribution(std::move(atoms), std::move(p));
}

}  // namespace detail

inline RandomInstance make_random_instance(RandomSource& rng, int max_n = 8) {
  RandomInstance inst;
  const bool dyadic = rng.uniform_index(2) == 0;
  const bool lcs_kind = rng.uniform_index(4) == 0;  // 1-in-4 LCS-type

  int n;
  if (lcs_kind) {
    // even dimension, identical alphabet on both halves
    const int half = 2 + static_cast<int>(rng.uniform_index(2));  // 2 or 3
    n = 2 * half;
    FiniteDistribution d = detail::random_coord(rng, dyadic);
    inst.space = ProductSpace::iid(d, n);
    const int sigma = static_cast<int>(d.support_size());
    inst.f = make_lcs_function(half, sigma);
    inst.kind = "lcs";
    inst.exact = dyadic;  // LCS is integer-valued
    return inst;
  }

  n = 2 + static_cast<int>(rng.uniform_index(max_n - 1));
  std::vector<FiniteDistribution> coords;
  coords.reserve(n);
  for (int i = 0; i < n; ++i) coords.push_back(detail::random_coord(rng, dyadic));
  inst.space = ProductSpace(std::move(coords));

  const bool integer_coeffs = rng.uniform_index(2) == 0;
  std::map<SubsetMask, double> coeffs;
  const int terms = 2 + static_cast<int>(rng.uniform_index(2 * n));
  const SubsetMask full = (1u << n) - 1;
  for (int t = 0; t < terms; ++t) {
    const SubsetMask mask = static_cast<SubsetMask>(rng.uniform_index(full + 1));
    double c;
    if (integer_coeffs)
      c = static_cast<double>(static_cast<int>(rng.uniform_index(7)) - 3);
    else
      c = 2.0 * rng.uniform() - 1.0;
    coeffs[mask] += c;
  }
  int max_support = 0;
  for (const auto& d : inst.space.coords)
    max_support = std::max(max_support, static_cast<int>(d.support_size()));
  inst.f = make_multilinear(n, std::move(coeffs),
                            ValueTable::identity(max_support));
  inst.kind = "multilinear";
  inst.exact = dyadic && integer_coeffs;
  return inst;
}

}  // namespace varjack
