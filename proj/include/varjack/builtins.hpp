#pragma once

#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "varjack/lcs.hpp"
#include "varjack/model.hpp"

namespace varjack {

// Named function families.  Atom ids map to real values through an explicit
// table so that the exact engine only ever sees small integers.

// id -> value lookup; by default atom k maps to 2k-1 shifted Rademacher-style
// only when the table says so, otherwise identity.
struct ValueTable {
  std::vector<double> values;  // indexed by atom id
  double operator()(int atom) const {
    if (atom < 0 || atom >= static_cast<int>(values.size()))
      throw std::invalid_argument("atom id outside value table");
    return values[atom];
  }
  static ValueTable identity(int support) {
    ValueTable t;
    t.values.resize(support);
    for (int i = 0; i < support; ++i) t.values[i] = i;
    return t;
  }
  static ValueTable signs() { return ValueTable{{-1.0, 1.0}}; }
};

inline CoordFunction make_additive(int n, ValueTable table) {
  CoordFunction f;
  f.arity = n;
  f.label = "additive";
  f.permutation_symmetric = true;
  f.eval = [table = std::move(table)](const Configuration& c) {
    double s = 0.0;
    for (int a : c) s += table(a);
    return s;
  };
  return f;
}

inline CoordFunction make_parity(int n, ValueTable table = ValueTable::signs()) {
  CoordFunction f;
  f.arity = n;
  f.label = "parity";
  f.permutation_symmetric = true;
  f.eval = [table = std::move(table)](const Configuration& c) {
    double s = 1.0;
    for (int a : c) s *= table(a);
    return s;
  };
  return f;
}

// S(x) = x_1 * ... * x_m on {0,1} atoms (identity values): the prefix-product
// family used for the boolean-increment bounds.
inline CoordFunction make_product_of_prefix(int n, int prefix_len) {
  if (prefix_len < 0 || prefix_len > n)
    throw std::invalid_argument("prefix length out of range");
  CoordFunction f;
  f.arity = n;
  f.label = "product-of-prefix(" + std::to_string(prefix_len) + ")";
  f.boolean_increments = true;
  f.eval = [prefix_len](const Configuration& c) {
    double s = 1.0;
    for (int i = 0; i < prefix_len; ++i) s *= c[i];
    return s;
  };
  return f;
}

// OR of ANDs over consecutive blocks of `width` coordinates on {0,1} atoms.
inline CoordFunction make_tribes(int n, int width) {
  if (width < 1 || n % width != 0)
    throw std::invalid_argument("tribe width must divide n");
  CoordFunction f;
  f.arity = n;
  f.label = "tribes(" + std::to_string(width) + ")";
  f.boolean_increments = true;
  f.eval = [n, width](const Configuration& c) {
    for (int start = 0; start < n; start += width) {
      bool all = true;
      for (int t = 0; t < width && all; ++t) all = c[start + t] != 0;
      if (all) return 1.0;
    }
    return 0.0;
  };
  return f;
}

inline CoordFunction make_dictator(int n, int coord = 0) {
  CoordFunction f;
  f.arity = n;
  f.label = "dictator";
  f.boolean_increments = true;
  f.eval = [coord](const Configuration& c) { return double(c[coord]); };
  return f;
}

// S(x) = sum over masks of coeff[mask] * prod_{i in mask} v(x_i)
inline CoordFunction make_multilinear(int n,
                                      std::map<SubsetMask, double> coeffs,
                                      ValueTable table) {
  CoordFunction f;
  f.arity = n;
  f.label = "multilinear";
  f.eval = [coeffs = std::move(coeffs),
            table = std::move(table)](const Configuration& c) {
    double s = 0.0;
    for (const auto& [mask, coef] : coeffs) {
      double term = coef;
      SubsetMask m = mask;
      for (int i = 0; m != 0; ++i, m >>= 1)
        if (m & 1u) term *= table(c[i]);
      s += term;
    }
    return s;
  };
  return f;
}

// LCS of the two halves of a 2n-letter configuration.
inline CoordFunction make_lcs_function(int word_len, int alphabet = 2) {
  CoordFunction f;
  f.arity = 2 * word_len;
  f.label = "lcs(n=" + std::to_string(word_len) + ")";
  f.boolean_increments = false;  // increments are in {-1,0,1}, not boolean
  auto bp = std::make_shared<BitParallelLcs>(alphabet);
  f.eval = [word_len, bp](const Configuration& c) {
    Word x(c.begin(), c.begin() + word_len);
    Word y(c.begin() + word_len, c.end());
    return static_cast<double>(bp->length(x, y));
  };
  return f;
}

// Elementary symmetric sums, S(x) = sum_k A_k e_k(v(x)), in O(n^2) via the
// standard prefix recursion.
inline CoordFunction make_symmetric_poly(int n, std::vector<double> weights,
                                         ValueTable table = ValueTable::signs()) {
  if (static_cast<int>(weights.size()) != n)
    throw std::invalid_argument("need one weight per degree 1..n");
  CoordFunction f;
  f.arity = n;
  f.label = "elementary-symmetric";
  f.permutation_symmetric = true;
  f.eval = [weights = std::move(weights),
            table = std::move(table)](const Configuration& c) {
    const int n = static_cast<int>(c.size());
    std::vector<double> e(n + 1, 0.0);
    e[0] = 1.0;
    for (int i = 0; i < n; ++i) {
      const double v = table(c[i]);
      for (int k = std::min(i + 1, n); k >= 1; --k) e[k] += v * e[k - 1];
    }
    double s = 0.0;
    for (int k = 1; k <= n; ++k) s += weights[k - 1] * e[k];
    return s;
  };
  return f;
}

inline ProductSpace rademacher_space(int n) {
  return ProductSpace::iid(FiniteDistribution::rademacher(), n);
}

inline ProductSpace bernoulli_space(int n, double p = 0.5) {
  return ProductSpace::iid(FiniteDistribution::bernoulli(p), n);
}

inline ProductSpace uniform_space(int n, int alphabet) {
  return ProductSpace::iid(FiniteDistribution::uniform(alphabet), n);
}

}  // namespace varjack
