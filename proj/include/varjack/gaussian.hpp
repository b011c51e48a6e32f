#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "varjack/builtins.hpp"
#include "varjack/combinatorics.hpp"
#include "varjack/model.hpp"

namespace varjack {

// Real polynomial G(x) = sum_j coeffs[j] x^j.  Polynomials keep every
// Gaussian expectation exact (moments are double factorials), so the limit
// statements become testable identities instead of approximations.
struct PolynomialG {
  std::vector<double> coeffs;  // coeffs[j] multiplies x^j

  PolynomialG() : coeffs{0.0} {}
  explicit PolynomialG(std::vector<double> c) : coeffs(std::move(c)) {
    if (coeffs.empty()) coeffs.push_back(0.0);
  }

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  double operator()(double x) const {
    double acc = 0.0;
    for (std::size_t j = coeffs.size(); j-- > 0;) acc = acc * x + coeffs[j];
    return acc;
  }

  PolynomialG derivative() const {
    if (coeffs.size() <= 1) return PolynomialG({0.0});
    std::vector<double> d(coeffs.size() - 1);
    for (std::size_t j = 1; j < coeffs.size(); ++j) d[j - 1] = j * coeffs[j];
    return PolynomialG(std::move(d));
  }

  PolynomialG nth_derivative(int k) const {
    PolynomialG g = *this;
    for (int i = 0; i < k; ++i) g = g.derivative();
    return g;
  }

  PolynomialG squared() const {
    std::vector<double> s(2 * coeffs.size() - 1, 0.0);
    for (std::size_t a = 0; a < coeffs.size(); ++a)
      for (std::size_t b = 0; b < coeffs.size(); ++b)
        s[a + b] += coeffs[a] * coeffs[b];
    return PolynomialG(std::move(s));
  }

  // E G(Z) for standard normal Z, exact
  double gaussian_mean() const {
    double acc = 0.0;
    for (std::size_t j = 0; j < coeffs.size(); ++j)
      acc += coeffs[j] * gaussian_moment(static_cast<int>(j));
    return acc;
  }
};

struct GaussianTargets {
  std::vector<double> eta;    // eta[k-1] = E[G^(k)(Z)^2]
  std::vector<double> theta;  // theta[k-1] = (E G^(k)(Z))^2
  double variance = 0.0;      // Var G(Z)
};

inline GaussianTargets gaussian_targets(const PolynomialG& g, int kmax) {
  if (kmax < 1) throw std::invalid_argument("kmax must be >= 1");
  GaussianTargets t;
  t.eta.resize(kmax);
  t.theta.resize(kmax);
  PolynomialG d = g;
  for (int k = 1; k <= kmax; ++k) {
    d = d.derivative();
    t.eta[k - 1] = d.squared().gaussian_mean();
    const double m = d.gaussian_mean();
    t.theta[k - 1] = m * m;
  }
  const double mean = g.gaussian_mean();
  t.variance = g.squared().gaussian_mean() - mean * mean;
  return t;
}

// Finite series identities for polynomial G: the variance expansion in eta,
// the expansion in theta, and the level link eta_i/i! = sum_j C(j,i) theta_j/j!.
struct SeriesResiduals {
  double var_eta = 0.0;
  double var_theta = 0.0;
  double level_link = 0.0;
  double sandwich = 0.0;  // truncation sandwich violation, should be <= 0

  double max_residual() const {
    return std::max({var_eta, var_theta, level_link, sandwich});
  }
};

inline SeriesResiduals gaussian_series_residuals(const PolynomialG& g) {
  const int d = std::max(1, g.degree());
  GaussianTargets t = gaussian_targets(g, d);
  SeriesResiduals r;

  double alt = 0.0, pos = 0.0;
  for (int i = 1; i <= d; ++i) {
    alt += ((i % 2) ? 1.0 : -1.0) * t.eta[i - 1] / factorial(i);
    pos += t.theta[i - 1] / factorial(i);
  }
  const double scale = std::max(1.0, std::abs(t.variance));
  r.var_eta = std::abs(t.variance - alt) / scale;
  r.var_theta = std::abs(t.variance - pos) / scale;

  for (int i = 1; i <= d; ++i) {
    double rhs = 0.0;
    for (int j = i; j <= d; ++j)
      rhs += binom(j, i) * t.theta[j - 1] / factorial(j);
    r.level_link = std::max(
        r.level_link, std::abs(t.eta[i - 1] / factorial(i) - rhs) / scale);
  }

  // sandwich at every truncation order: the alternating remainder of the eta
  // series stays between the next theta term and the next eta term
  double partial = 0.0;
  for (int k = 0; k < d; ++k) {
    if (k >= 1)
      partial += ((k % 2) ? 1.0 : -1.0) * t.eta[k - 1] / factorial(k);
    const double mid = ((k % 2) ? -1.0 : 1.0) * (t.variance - partial);
    r.sandwich = std::max({r.sandwich,
                           (t.theta[k] / factorial(k + 1) - mid) / scale,
                           (mid - t.eta[k] / factorial(k + 1)) / scale});
  }
  r.sandwich = std::max(0.0, r.sandwich);
  return r;
}

// ---------------------------------------------------------------------------
// Finite-n jackknife vectors for S = G(sum_i eps_i / sqrt(n)), Rademacher
// signs, computed in O(n k) per order via the binomial law of the untouched
// signs instead of 2^n enumeration.

struct RademacherJackknife {
  int n = 0;
  std::vector<double> Jp, Kp;  // J'_k, K'_k at [k-1]
  std::vector<double> J, K;    // J_k = k! J'_k, K_k = k! K'_k
};

inline RademacherJackknife rademacher_jackknife(const PolynomialG& g, int n,
                                                int kmax) {
  if (kmax < 1 || kmax > n) throw std::invalid_argument("need 1 <= kmax <= n");
  if (n > 500) throw std::invalid_argument("rademacher_jackknife: n too large");
  RademacherJackknife out;
  out.n = n;
  out.Jp.resize(kmax);
  out.Kp.resize(kmax);
  out.J.resize(kmax);
  out.K.resize(kmax);
  const double sqn = std::sqrt(static_cast<double>(n));

  for (int k = 1; k <= kmax; ++k) {
    const int rest = n - k;
    const double norm = std::pow(2.0, -rest);
    // h(r) = 2^{-k} sum_i C(k,i) (-1)^i G((2i - k + r)/sqrt(n))
    auto h = [&](double r) {
      double acc = 0.0;
      for (int i = 0; i <= k; ++i)
        acc += ((i % 2) ? -1.0 : 1.0) * binom(k, i) * g((2.0 * i - k + r) / sqn);
      return std::ldexp(acc, -k);
    };
    // R = sum of the n-k untouched signs: binomial weights
    double j_acc = 0.0;
    for (int b = 0; b <= rest; ++b) {
      const double w = binom(rest, b) * norm;
      const double hv = h(2.0 * b - rest);
      j_acc += w * hv * hv;
    }
    out.Jp[k - 1] = binom(n, k) * j_acc;

    // K': average first, then square
    double mean_h = 0.0;
    for (int i = 0; i <= k; ++i) {
      double gbar = 0.0;
      for (int b = 0; b <= rest; ++b)
        gbar += binom(rest, b) * norm * g((2.0 * i - k + 2.0 * b - rest) / sqn);
      mean_h += ((i % 2) ? -1.0 : 1.0) * binom(k, i) * gbar;
    }
    mean_h = std::ldexp(mean_h, -k);
    out.Kp[k - 1] = binom(n, k) * mean_h * mean_h;

    out.J[k - 1] = factorial(k) * out.Jp[k - 1];
    out.K[k - 1] = factorial(k) * out.Kp[k - 1];
  }
  return out;
}

// The explicit coordinate function S(eps) = G(sum_i v(eps_i)/sqrt(n)) for
// cross-validation against the generic enumeration engine.
inline CoordFunction make_rademacher_sum(const PolynomialG& g, int n) {
  CoordFunction f;
  f.arity = n;
  f.label = "G(normalized sign sum)";
  f.permutation_symmetric = true;
  const double sqn = std::sqrt(static_cast<double>(n));
  f.eval = [g, sqn](const Configuration& c) {
    double s = 0.0;
    for (int a : c) s += (a == 0) ? -1.0 : 1.0;
    return g(s / sqn);
  };
  return f;
}

struct ConvergenceRow {
  int n = 0, k = 0;
  double J = 0.0, eta = 0.0, K = 0.0, theta = 0.0;
  double gap_J = 0.0, gap_K = 0.0;
};

inline std::vector<ConvergenceRow> convergence_table(
    const PolynomialG& g, const std::vector<int>& n_grid, int kmax) {
  GaussianTargets t = gaussian_targets(g, kmax);
  std::vector<ConvergenceRow> rows;
  for (int n : n_grid) {
    RademacherJackknife jk = rademacher_jackknife(g, n, std::min(kmax, n));
    for (int k = 1; k <= std::min(kmax, n); ++k) {
      ConvergenceRow r;
      r.n = n;
      r.k = k;
      r.J = jk.J[k - 1];
      r.K = jk.K[k - 1];
      r.eta = t.eta[k - 1];
      r.theta = t.theta[k - 1];
      r.gap_J = std::abs(r.J - r.eta);
      r.gap_K = std::abs(r.K - r.theta);
      rows.push_back(r);
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Attainability: build S with prescribed jackknife values K_k = a_k on the
// Rademacher cube, via weighted elementary symmetric sums.

struct HoeffdingSpec {
  int n = 0;
  std::vector<double> targets;  // a_1..a_n >= 0

  void validate() const {
    if (n < 1 || static_cast<int>(targets.size()) != n)
      throw std::invalid_argument("need one target per k in [1, n]");
    for (double a : targets)
      if (a < 0.0) throw std::domain_error("targets must be nonnegative");
  }
};

struct HoeffdingConstruction {
  CoordFunction S;
  std::vector<double> amplitudes;  // A_k = sqrt(a_k / (k! C(n,k)))
};

inline HoeffdingConstruction hoeffding_construct(const HoeffdingSpec& spec) {
  spec.validate();
  HoeffdingConstruction out;
  out.amplitudes.resize(spec.n);
  for (int k = 1; k <= spec.n; ++k)
    out.amplitudes[k - 1] =
        std::sqrt(spec.targets[k - 1] / (factorial(k) * binom(spec.n, k)));
  out.S = make_symmetric_poly(spec.n, out.amplitudes);
  out.S.label = "prescribed-jackknife";
  return out;
}

}  // namespace varjack
