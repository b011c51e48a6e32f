#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "varjack/combinatorics.hpp"
#include "varjack/model.hpp"

namespace varjack {

// ---------------------------------------------------------------------------
// State enumeration over a product space (mixed-radix indexing).

struct StateTable {
  int n = 0;
  std::size_t total = 1;
  std::vector<std::size_t> strides;  // strides[i] multiplies digit i
  std::vector<int> radices;
  const ProductSpace* space = nullptr;

  explicit StateTable(const ProductSpace& s) : space(&s) {
    n = s.dimension();
    strides.resize(n);
    radices.resize(n);
    for (int i = 0; i < n; ++i) {
      strides[i] = total;
      radices[i] = static_cast<int>(s.coords[i].support_size());
      total *= static_cast<std::size_t>(radices[i]);
    }
  }

  int digit(std::size_t state, int i) const {
    return static_cast<int>(state / strides[i]) % radices[i];
  }

  Configuration config(std::size_t state) const {
    Configuration c(n);
    for (int i = 0; i < n; ++i) c[i] = space->coords[i].atoms[digit(state, i)];
    return c;
  }

  double prob(std::size_t state) const {
    double p = 1.0;
    for (int i = 0; i < n; ++i) p *= space->coords[i].probs[digit(state, i)];
    return p;
  }
};

inline void check_state_cap(const ProductSpace& space, double cap_bits) {
  const double bits = space.state_bits();
  if (bits > cap_bits + 1e-9)
    throw std::runtime_error(
        "exact engine: state space needs " + std::to_string(bits) +
        " bits, cap is " + std::to_string(cap_bits));
}

// ---------------------------------------------------------------------------
// Correlation table C(alpha) = E[S * S^alpha] = E[(E^alpha S)^2], the
// sufficient statistic for every decomposition quantity below.

struct CorrelationTable {
  int n = 0;
  std::vector<double> corr;  // indexed by SubsetMask, size 2^n
  double mean = 0.0;
  double second_moment = 0.0;
  bool exact_flag = false;  // dyadic probabilities and exactly computed values

  double variance() const { return corr[0] - corr.back(); }
  SubsetMask full_mask() const { return (n >= 32) ? ~0u : ((1u << n) - 1); }
};

namespace detail {

// corr[mask] for one mask from precomputed value/probability arrays, via the
// conditional-mean route: group states on the coordinates outside `mask`.
inline double corr_entry(const StateTable& st, const std::vector<double>& vals,
                         const std::vector<double>& probs,
                         const std::vector<double>* valsB, SubsetMask mask) {
  std::vector<std::size_t> out_stride(st.n, 0);
  std::size_t out_total = 1;
  for (int i = 0; i < st.n; ++i) {
    if (!(mask & (1u << i))) {
      out_stride[i] = out_total;
      out_total *= static_cast<std::size_t>(st.radices[i]);
    }
  }
  std::vector<double> numer(out_total, 0.0), denom(out_total, 0.0);
  std::vector<double> numerB;
  if (valsB) numerB.assign(out_total, 0.0);
  for (std::size_t s = 0; s < st.total; ++s) {
    std::size_t key = 0;
    std::size_t rem = s;
    for (int i = 0; i < st.n; ++i) {
      const int d = static_cast<int>(rem % st.radices[i]);
      rem /= st.radices[i];
      if (!(mask & (1u << i))) key += static_cast<std::size_t>(d) * out_stride[i];
    }
    numer[key] += probs[s] * vals[s];
    denom[key] += probs[s];
    if (valsB) numerB[key] += probs[s] * (*valsB)[s];
  }
  // extended precision: downstream signed subset sums cancel heavily and
  // get re-amplified by k! C(n,k) factors
  long double acc = 0.0L;
  for (std::size_t k = 0; k < out_total; ++k) {
    if (denom[k] <= 0.0) continue;
    if (valsB)
      acc += static_cast<long double>(numer[k]) * numerB[k] / denom[k];
    else
      acc += static_cast<long double>(numer[k]) * numer[k] / denom[k];
  }
  return static_cast<double>(acc);
}

inline bool dyadic_probs(const ProductSpace& space) {
  for (const auto& d : space.coords)
    for (double p : d.probs) {
      const double scaled = p * 4096.0;
      if (std::abs(scaled - std::round(scaled)) > 0.0) return false;
    }
  return true;
}

}  // namespace detail

inline CorrelationTable correlation_table_from_values(
    const ProductSpace& space, const std::vector<double>& vals,
    double cap_bits = 20.0) {
  check_state_cap(space, cap_bits);
  StateTable st(space);
  if (vals.size() != st.total)
    throw std::invalid_argument("value array size mismatch");
  std::vector<double> probs(st.total);
  for (std::size_t s = 0; s < st.total; ++s) probs[s] = st.prob(s);

  CorrelationTable t;
  t.n = st.n;
  t.exact_flag = detail::dyadic_probs(space);
  const std::size_t masks = std::size_t{1} << st.n;
  t.corr.resize(masks);
  for (SubsetMask m = 0; m < masks; ++m)
    t.corr[m] = detail::corr_entry(st, vals, probs, nullptr, m);
  t.second_moment = t.corr[0];
  double mean = 0.0;
  for (std::size_t s = 0; s < st.total; ++s) mean += probs[s] * vals[s];
  t.mean = mean;
  return t;
}

inline std::vector<double> tabulate_values(const ProductSpace& space,
                                           const CoordFunction& f) {
  if (f.arity != space.dimension())
    throw std::invalid_argument("function arity != space dimension");
  StateTable st(space);
  std::vector<double> vals(st.total);
  for (std::size_t s = 0; s < st.total; ++s) vals[s] = f(st.config(s));
  return vals;
}

inline CorrelationTable correlation_table(const ProductSpace& space,
                                          const CoordFunction& f,
                                          double cap_bits = 20.0) {
  check_state_cap(space, cap_bits);
  return correlation_table_from_values(space, tabulate_values(space, f),
                                       cap_bits);
}

// ---------------------------------------------------------------------------
// Telescoping decomposition, iterated differences and jackknife vectors.

struct DecompositionReport {
  int n = 0;
  std::vector<double> B;                // B[k-1] = B_k
  std::vector<std::vector<double>> DB;  // DB[l][k-1] = D^l B_k, k in [1, n-l]
  std::vector<double> Jp, Kp;           // J'_k, K'_k at [k-1]
  double variance = 0.0;
  bool exact_flag = false;
  double triangle_residual = 0.0;  // max |DB[l][k]-DB[l][k+1]-DB[l+1][k]|
};

inline DecompositionReport b_and_derivatives(const CorrelationTable& t) {
  const int n = t.n;
  DecompositionReport r;
  r.n = n;
  r.exact_flag = t.exact_flag;
  r.variance = t.variance();
  r.DB.assign(n, {});
  for (int l = 0; l < n; ++l) r.DB[l].assign(n - l, 0.0);

  // D^l B_k = average over disjoint (A, B), |A| = l+1, |B| = k-1, of the
  // signed subset sum of correlation entries over subsets of A.  The signed
  // sums cancel almost completely, so everything accumulates in extended
  // precision before the final averaging.
  std::vector<std::vector<long double>> acc_db(n);
  for (int l = 0; l < n; ++l) acc_db[l].assign(n - l, 0.0L);
  const SubsetMask full = t.full_mask();
  for (SubsetMask A = 1; A <= full; ++A) {
    const int a = popcount(A);
    const SubsetMask comp = full & ~A;
    SubsetMask B = comp;
    while (true) {
      const int b = popcount(B);
      // signed sum over subsets of A
      long double acc = 0.0L;
      SubsetMask sub = A;
      while (true) {
        if (popcount(sub) & 1)
          acc -= t.corr[sub | B];
        else
          acc += t.corr[sub | B];
        if (sub == 0) break;
        sub = (sub - 1) & A;
      }
      if (b + 1 <= n - (a - 1)) acc_db[a - 1][b] += acc;
      if (B == 0) break;
      B = (B - 1) & comp;
    }
  }
  for (int l = 0; l < n; ++l)
    for (int k = 1; k <= n - l; ++k)
      r.DB[l][k - 1] = static_cast<double>(
          acc_db[l][k - 1] /
          static_cast<long double>(binom(n, l + 1) * binom(n - l - 1, k - 1)));

  r.B = r.DB[0];
  r.Jp.assign(n, 0.0);
  r.Kp.assign(n, 0.0);
  for (int k = 1; k <= n; ++k) {
    r.Jp[k - 1] = binom(n, k) * r.DB[k - 1][0];
    r.Kp[k - 1] = binom(n, k) * r.DB[k - 1][n - k];
  }
  for (int l = 0; l + 1 < n; ++l)
    for (int k = 1; k + 1 <= n - l; ++k)
      r.triangle_residual =
          std::max(r.triangle_residual,
                   std::abs(r.DB[l][k - 1] - r.DB[l][k] - r.DB[l + 1][k - 1]));
  return r;
}

// J'_k = C(n,k) D^{k-1}B_1 and K'_k = C(n,k) D^{k-1}B_{n-k+1}
inline std::pair<std::vector<double>, std::vector<double>> jackknife_vectors(
    const DecompositionReport& r) {
  return {r.Jp, r.Kp};
}

// ---------------------------------------------------------------------------
// Identity verification.

struct IdentityCheck {
  std::string name;
  double residual = 0.0;  // normalized by max(1, |Var|)
  bool pass = false;
};

struct IdentityReport {
  std::vector<IdentityCheck> entries;
  double tolerance = 1e-9;

  bool all_pass() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return true;
  }
  double max_residual() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, e.residual);
    return m;
  }
};

inline IdentityReport verify_identities(const DecompositionReport& r,
                                        const CorrelationTable& t,
                                        double tol = 1e-9) {
  const int n = r.n;
  const double var = r.variance;
  const double scale = std::max(1.0, std::abs(var));
  IdentityReport rep;
  rep.tolerance = r.exact_flag ? std::min(tol, 1e-9) : tol;

  auto add = [&](const std::string& name, double raw) {
    IdentityCheck c;
    c.name = name;
    c.residual = std::abs(raw) / scale;
    c.pass = c.residual <= rep.tolerance;
    rep.entries.push_back(c);
  };

  // (1) telescoping sum
  double sumB = 0.0;
  for (double b : r.B) sumB += b;
  add("telescoping", sumB - var);

  // (2) complete monotonicity
  double min_db = 0.0;
  for (const auto& row : r.DB)
    for (double v : row) min_db = std::min(min_db, v);
  add("complete_monotonicity", std::min(0.0, min_db));

  // internal triangle consistency D^l B_k - D^l B_{k+1} = D^{l+1} B_k
  add("difference_triangle", r.triangle_residual);

  // (3) the two full decompositions of the variance
  double altJ = 0.0, sumK = 0.0;
  for (int k = 1; k <= n; ++k) {
    altJ += ((k % 2) ? 1.0 : -1.0) * r.Jp[k - 1];
    sumK += r.Kp[k - 1];
  }
  add("egalJ", var - altJ);
  add("sumK", var - sumK);

  // (4) remainder identities for every truncation order
  double formJ = 0.0, formK = 0.0;
  {
    double lhsJ = var, lhsK = var;
    for (int k = 1; k <= n; ++k) {
      lhsJ += ((k % 2) ? -1.0 : 1.0) * r.Jp[k - 1];
      lhsK -= r.Kp[k - 1];
      double rhsJ = 0.0, rhsK = 0.0;
      for (int i = 1; i <= n - k; ++i)
        rhsJ += binom(n - i, k) * r.DB[k][i - 1];
      rhsJ *= (k % 2) ? -1.0 : 1.0;
      for (int j = k + 1; j <= n; ++j)
        rhsK += binom(j - 1, k) * r.DB[k][j - k - 1];
      formJ = std::max(formJ, std::abs(lhsJ - rhsJ));
      formK = std::max(formK, std::abs(lhsK - rhsK));
    }
  }
  add("formJ", formJ);
  add("formK", formK);

  // (5) sandwich chains
  double sandJ = 0.0, sandK = 0.0;
  {
    double altPartial = 0.0, sumPartial = 0.0;
    for (int k = 0; k <= n - 1; ++k) {
      if (k >= 1) {
        altPartial += ((k % 2) ? 1.0 : -1.0) * r.Jp[k - 1];
        sumPartial += r.Kp[k - 1];
      }
      const double midJ = ((k % 2) ? -1.0 : 1.0) * (var - altPartial);
      const double midK = var - sumPartial;
      sandJ = std::max({sandJ, r.Kp[k] - midJ, midJ - r.Jp[k]});
      sandK = std::max({sandK, r.Kp[k] - midK, midK - r.Jp[k]});
    }
    sandJ = std::max(0.0, sandJ);
    sandK = std::max(0.0, sandK);
  }
  add("sandwichJ", sandJ);
  add("sandwichK", sandK);

  // (6) restK for every k
  double restK = 0.0;
  for (int k = 0; k <= n; ++k) {
    double rhs = 0.0;
    for (int j = 1; j <= k; ++j)
      rhs += ((j % 2) ? 1.0 : -1.0) * r.Jp[j - 1];
    double tail = 0.0;
    for (int j = k + 1; j <= n; ++j) tail += binom(j - 1, k) * r.Kp[j - 1];
    rhs += ((k % 2) ? -1.0 : 1.0) * tail;
    restK = std::max(restK, std::abs(var - rhs));
  }
  add("restK", restK);

  // (7) tronc for every k
  double tronc = 0.0;
  for (int k = 0; k <= n; ++k) {
    double rhs = 0.0;
    for (int j = 1; j <= k; ++j)
      rhs += ((j % 2) ? 1.0 : -1.0) * binom(k, j) / binom(n, j) * r.Jp[j - 1];
    for (int j = 1; j <= n - k; ++j)
      rhs += binom(n - k, j) / binom(n, j) * r.Kp[j - 1];
    tronc = std::max(tronc, std::abs(var - rhs));
  }
  add("tronc", tronc);

  // (8) reconstruction of B_k from J' and from K'
  double invBJ = 0.0, invBK = 0.0;
  for (int k = 1; k <= n; ++k) {
    double fromJ = 0.0, fromK = 0.0;
    for (int j = 0; j <= k - 1; ++j)
      fromJ += ((j % 2) ? -1.0 : 1.0) * binom(k - 1, j) / binom(n, j + 1) *
               r.Jp[j];
    for (int j = 0; j <= n - k; ++j)
      fromK += binom(n - k, j) / binom(n, j + 1) * r.Kp[j];
    invBJ = std::max(invBJ, std::abs(r.B[k - 1] - fromJ));
    invBK = std::max(invBK, std::abs(r.B[k - 1] - fromK));
  }
  add("invBJ", invBJ);
  add("invBK", invBK);

  // jackknife ordering J'_k >= K'_k >= 0
  double order = 0.0;
  for (int k = 0; k < n; ++k)
    order = std::max({order, r.Kp[k] - r.Jp[k], -r.Kp[k]});
  add("jk_order", std::max(0.0, order));

  // table sanity: corr[alpha] >= corr[full]
  double table_floor = 0.0;
  for (double c : t.corr) table_floor = std::min(table_floor, c - t.corr.back());
  add("corr_floor", std::min(0.0, table_floor));

  return rep;
}

// ---------------------------------------------------------------------------
// Covariance decomposition via polarization: B_k(S, T).

struct CovarianceDecomposition {
  std::vector<double> B;  // B_k(S, T)
  double covariance = 0.0;
};

inline CovarianceDecomposition covariance_b(const ProductSpace& space,
                                            const CoordFunction& f,
                                            const CoordFunction& g,
                                            double cap_bits = 20.0) {
  if (f.arity != g.arity) throw std::invalid_argument("arity mismatch");
  check_state_cap(space, cap_bits);
  StateTable st(space);
  std::vector<double> valsS = tabulate_values(space, f);
  std::vector<double> valsT = tabulate_values(space, g);
  std::vector<double> probs(st.total);
  for (std::size_t s = 0; s < st.total; ++s) probs[s] = st.prob(s);

  const int n = st.n;
  const std::size_t masks = std::size_t{1} << n;
  std::vector<double> corr(masks);
  for (SubsetMask m = 0; m < masks; ++m)
    corr[m] = detail::corr_entry(st, valsS, probs, &valsT, m);

  CovarianceDecomposition out;
  out.covariance = corr[0] - corr[masks - 1];
  out.B.assign(n, 0.0);
  for (SubsetMask beta = 0; beta < masks; ++beta) {
    const int k = popcount(beta) + 1;
    for (int i = 0; i < n; ++i) {
      if (beta & (1u << i)) continue;
      out.B[k - 1] += corr[beta] - corr[beta | (1u << i)];
    }
  }
  for (int k = 1; k <= n; ++k)
    out.B[k - 1] /= binom(n, k - 1) * (n - (k - 1));
  return out;
}

// ---------------------------------------------------------------------------
// Chatterjee-style T_A family.

struct TFamilyReport {
  std::vector<double> expected_T_A;  // indexed by subset mask, A proper subset
  double expected_T = 0.0;
  std::vector<double> level_B;  // reconstruction of B_k from levels |A| = k-1
};

inline TFamilyReport t_family(const CorrelationTable& t) {
  const int n = t.n;
  const std::size_t masks = std::size_t{1} << n;
  TFamilyReport rep;
  rep.expected_T_A.assign(masks, 0.0);
  rep.level_B.assign(n, 0.0);
  for (SubsetMask A = 0; A < masks; ++A) {
    if (A == masks - 1) continue;  // A is a proper subset
    double e = 0.0;
    for (int j = 0; j < n; ++j) {
      if (A & (1u << j)) continue;
      e += t.corr[A] - t.corr[A | (1u << j)];
    }
    e *= 2.0;
    rep.expected_T_A[A] = e;
    const int a = popcount(A);
    const double w = 1.0 / (2.0 * (n - a) * binom(n, a));
    rep.expected_T += e * w;
    rep.level_B[a] += e * w;  // level |A| = k-1 rebuilds B_k
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Interpolation identity: Var S reconstructed by exact Beta integration of
// the per-coordinate coupling polynomials of d_i S.

struct InterpolationReport {
  double reconstruction_residual = 0.0;  // |sum_i integral - Var|
  double endpoint_residual = 0.0;        // |rho(0) - rho(1) - Var|
  double vanish_residual = 0.0;          // entries of corr(d_i) with i in mask
  double beta_binomial_residual = 0.0;
  double tolerance = 1e-9;
  bool pass = false;
};

inline InterpolationReport interpolation_check(const ProductSpace& space,
                                               const CoordFunction& f,
                                               double cap_bits = 20.0,
                                               double tol = 1e-9) {
  check_state_cap(space, cap_bits);
  StateTable st(space);
  const int n = st.n;
  std::vector<double> vals = tabulate_values(space, f);
  std::vector<double> probs(st.total);
  for (std::size_t s = 0; s < st.total; ++s) probs[s] = st.prob(s);
  CorrelationTable base = correlation_table_from_values(space, vals, cap_bits);
  const double var = base.variance();
  const double scale = std::max(1.0, std::abs(var));

  InterpolationReport rep;
  rep.tolerance = tol;
  // rho(0) - rho(1): only the gamma = empty / full monomials survive
  rep.endpoint_residual =
      std::abs(base.corr[0] - base.corr.back() - var) / scale;

  const std::size_t masks = std::size_t{1} << n;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    // d_i S: subtract the conditional mean over coordinate i
    std::vector<double> dvals(st.total);
    const auto& dist = space.coords[i];
    const std::size_t stride = st.strides[i];
    const int radix = st.radices[i];
    for (std::size_t s = 0; s < st.total; ++s) {
      const int d = st.digit(s, i);
      const std::size_t lo = s - static_cast<std::size_t>(d) * stride;
      double m = 0.0;
      for (int a = 0; a < radix; ++a)
        m += dist.probs[a] * vals[lo + static_cast<std::size_t>(a) * stride];
      dvals[s] = vals[s] - m;
    }
    CorrelationTable dt = correlation_table_from_values(space, dvals, cap_bits);
    // g_i(alpha) = sum_gamma alpha^{|gamma|} (1-alpha)^{n-|gamma|} corr_d[gamma];
    // entries with i in gamma vanish, so every surviving monomial carries a
    // (1-alpha) factor; divide it out and Beta-integrate.
    for (SubsetMask g = 0; g < masks; ++g) {
      if (g & (1u << i)) {
        rep.vanish_residual =
            std::max(rep.vanish_residual, std::abs(dt.corr[g]) / scale);
        continue;
      }
      const int a = popcount(g);
      total += dt.corr[g] * beta_integral(a, n - a - 1);
    }
  }
  rep.reconstruction_residual = std::abs(total - var) / scale;

  // Beta-binomial identity: the mixture weights integrate to one per level
  CorrelationTable t2 = base;
  DecompositionReport dr = b_and_derivatives(t2);
  double mixture = 0.0, direct = 0.0;
  for (int k = 0; k <= n - 1; ++k) {
    mixture += n * binom(n - 1, k) * beta_integral(k, n - 1 - k) * dr.B[k];
    direct += dr.B[k];
  }
  rep.beta_binomial_residual = std::abs(mixture - direct) / scale;

  rep.pass = rep.reconstruction_residual <= tol &&
             rep.endpoint_residual <= tol && rep.vanish_residual <= tol &&
             rep.beta_binomial_residual <= tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Weak Talagrand-type bound for boolean increments on the fair cube.

struct TalagrandReport {
  double variance = 0.0;
  double bound = 0.0;
  bool pass = false;
  std::vector<double> l1, l2;  // per-coordinate norms of tau_j S
};

inline TalagrandReport weak_talagrand_check(const ProductSpace& space,
                                            const CoordFunction& f,
                                            double tol = 1e-12) {
  const int n = space.dimension();
  for (const auto& d : space.coords) {
    if (d.atoms != std::vector<int>{0, 1} ||
        std::abs(d.probs[0] - 0.5) > 1e-15 ||
        std::abs(d.probs[1] - 0.5) > 1e-15)
      throw std::invalid_argument("weak_talagrand_check: coordinates must be "
                                  "fair Bernoulli on {0,1}");
  }
  StateTable st(space);
  std::vector<double> vals = tabulate_values(space, f);

  double es = 0.0, es2 = 0.0;
  const double w = 1.0 / static_cast<double>(st.total);
  for (double v : vals) {
    es += w * v;
    es2 += w * v * v;
  }
  TalagrandReport rep;
  rep.variance = es2 - es * es;
  rep.l1.assign(n, 0.0);
  rep.l2.assign(n, 0.0);

  const double half_w = 2.0 * w;  // weight per assignment of the other coords
  for (int j = 0; j < n; ++j) {
    const std::size_t stride = st.strides[j];
    double l1 = 0.0, l22 = 0.0;
    for (std::size_t s = 0; s < st.total; ++s) {
      if (st.digit(s, j) != 0) continue;
      const double tau = vals[s] - vals[s + stride];
      const double at = std::abs(tau);
      if (at > tol && std::abs(at - 1.0) > tol)
        throw std::invalid_argument(
            "weak_talagrand_check: |tau_" + std::to_string(j) +
            " S| not in {0,1}");
      l1 += half_w * at;
      l22 += half_w * tau * tau;
    }
    rep.l1[j] = l1;
    rep.l2[j] = std::sqrt(l22);
    if (l22 <= 0.0) continue;  // tau_j S == 0 contributes nothing
    const double log_ratio = std::log(rep.l2[j] / l1);
    rep.bound += 0.25 *
                 (1.0 + 2.0 / n - 2.0 / (n * std::log(2.0)) * log_ratio) * l22;
  }
  rep.pass = rep.variance <= rep.bound + 1e-9;
  return rep;
}

inline double exact_variance(const ProductSpace& space, const CoordFunction& f,
                             double cap_bits = 20.0) {
  check_state_cap(space, cap_bits);
  StateTable st(space);
  std::vector<double> vals = tabulate_values(space, f);
  double es = 0.0, es2 = 0.0;
  for (std::size_t s = 0; s < st.total; ++s) {
    const double p = st.prob(s);
    es += p * vals[s];
    es2 += p * vals[s] * vals[s];
  }
  return es2 - es * es;
}

}  // namespace varjack
