#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "varjack/rng.hpp"

namespace varjack {

// A realization of the coordinate vector; entries are small atom ids.
using Configuration = std::vector<int>;

// Bitmask over coordinate indices [0, n).
using SubsetMask = std::uint32_t;

inline int popcount(SubsetMask m) { return __builtin_popcount(m); }

// Finite law of a single coordinate.  Atom ids are small non-negative
// integers; real-valued supports are mapped through an id -> value table
// inside the function evaluators, so enumeration stays exact.
struct FiniteDistribution {
  std::vector<int> atoms;
  std::vector<double> probs;

  FiniteDistribution() = default;
  FiniteDistribution(std::vector<int> a, std::vector<double> p)
      : atoms(std::move(a)), probs(std::move(p)) {
    validate();
  }

  static FiniteDistribution uniform(int support) {
    std::vector<int> a(support);
    for (int i = 0; i < support; ++i) a[i] = i;
    return FiniteDistribution(std::move(a),
                              std::vector<double>(support, 1.0 / support));
  }

  static FiniteDistribution bernoulli(double p) {
    return FiniteDistribution({0, 1}, {1.0 - p, p});
  }

  // Rademacher signs encoded as atoms {0, 1} -> values {-1, +1}.
  static FiniteDistribution rademacher() { return bernoulli(0.5); }

  std::size_t support_size() const { return atoms.size(); }

  void validate() const {
    if (atoms.empty()) throw std::invalid_argument("empty support");
    if (atoms.size() != probs.size())
      throw std::invalid_argument("atoms/probs length mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (probs[i] < 0.0) throw std::invalid_argument("negative probability");
      for (std::size_t j = i + 1; j < atoms.size(); ++j)
        if (atoms[i] == atoms[j])
          throw std::invalid_argument("duplicate atom id");
      total += probs[i];
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw std::invalid_argument("probabilities do not sum to 1");
  }

  // inverse-CDF in the stored probability order
  int sample(RandomSource& rng) const {
    double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return atoms[i];
    }
    return atoms.back();
  }

  double prob_of_atom(int atom) const {
    for (std::size_t i = 0; i < atoms.size(); ++i)
      if (atoms[i] == atom) return probs[i];
    throw std::invalid_argument("atom not in support");
  }
};

// Product of independent finite coordinates.
struct ProductSpace {
  std::vector<FiniteDistribution> coords;

  ProductSpace() = default;
  explicit ProductSpace(std::vector<FiniteDistribution> c)
      : coords(std::move(c)) {
    if (coords.empty()) throw std::invalid_argument("empty product space");
  }

  static ProductSpace iid(const FiniteDistribution& d, int n) {
    return ProductSpace(std::vector<FiniteDistribution>(n, d));
  }

  int dimension() const { return static_cast<int>(coords.size()); }

  double state_bits() const {
    double bits = 0.0;
    for (const auto& d : coords)
      bits += std::log2(static_cast<double>(d.support_size()));
    return bits;
  }
};

// The function under study together with the structural flags the exact
// engine needs.  Evaluation must be pure and finite on the support.
struct CoordFunction {
  int arity = 0;
  std::function<double(const Configuration&)> eval;
  std::string label;
  bool permutation_symmetric = false;
  bool boolean_increments = false;  // |tau_i S| in {0, 1} on the binary cube

  double operator()(const Configuration& c) const { return eval(c); }
};

inline void check_mask(SubsetMask mask, int n) {
  if (n < 32 && (mask >> n) != 0)
    throw std::invalid_argument("mask has a bit >= dimension");
}

// S^alpha: coordinates in `mask` taken from `replacement`, the rest from `c`.
inline Configuration resample(const Configuration& c, SubsetMask mask,
                              const Configuration& replacement) {
  if (c.size() != replacement.size())
    throw std::invalid_argument("configuration size mismatch");
  check_mask(mask, static_cast<int>(c.size()));
  Configuration out = c;
  for (int i = 0; mask != 0; ++i, mask >>= 1)
    if (mask & 1u) out[i] = replacement[i];
  return out;
}

// Delta_mask S = sum over subsets alpha' of mask of (-1)^|alpha'| S^{alpha'},
// evaluated at (c, r).  The empty mask is not defined by the expansion.
inline double delta_eval(const CoordFunction& f, const Configuration& c,
                         const Configuration& r, SubsetMask mask) {
  if (mask == 0) throw std::domain_error("delta_eval: empty mask");
  check_mask(mask, f.arity);
  double acc = 0.0;
  SubsetMask sub = mask;
  // iterate all submasks of `mask`, including 0
  while (true) {
    const double sign = (popcount(sub) & 1) ? -1.0 : 1.0;
    acc += sign * f(resample(c, sub, r));
    if (sub == 0) break;
    sub = (sub - 1) & mask;
  }
  return acc;
}

inline Configuration draw_config(const ProductSpace& space, RandomSource& rng) {
  Configuration c(space.coords.size());
  for (std::size_t i = 0; i < space.coords.size(); ++i)
    c[i] = space.coords[i].sample(rng);
  return c;
}

}  // namespace varjack
