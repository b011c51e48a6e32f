#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace varjack {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long nodes = 0;
  bool converged = true;
};

namespace detail {

// Adaptive Simpson with the standard 1/15 Richardson error estimate.
template <class F>
double simpson_step(const F& f, double a, double b, double fa, double fm,
                    double fb, double whole, double tol, int depth,
                    QuadratureResult& diag) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  diag.nodes += 2;
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0) {
    diag.converged = false;
    diag.error_estimate += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  if (std::abs(delta) <= 15.0 * tol) {
    diag.error_estimate += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, diag) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, diag);
}

}  // namespace detail

template <class F>
QuadratureResult adaptive_simpson(const F& f, double a, double b, double tol,
                                  int max_depth = 50) {
  QuadratureResult diag;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  diag.nodes = 3;
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  diag.value = detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth,
                                    diag);
  if (!diag.converged)
    throw std::runtime_error("quadrature did not converge; achieved error ~" +
                             std::to_string(diag.error_estimate));
  return diag;
}

struct HyperGapResult {
  int n = 0;
  double R = 0.0;
  double ratio = 0.0;  // R / sqrt(n)
  double error_estimate = 0.0;
  long nodes = 0;
};

// R(n) = sqrt(2) * integral over [0, 1/2] of
//   sqrt(sum_{i=1}^n (1/n) 2^{i-1} exp(-2^{i-1} theta)) / sqrt(theta) dtheta
// with the geometric level weights.  The substitution theta = u^2 removes
// the endpoint singularity: R = 2 sqrt(2) * integral_0^{1/sqrt(2)} g(u^2) du.
inline HyperGapResult hyper_gap_ratio(int n, double tol = 1e-9) {
  if (n < 1 || n > 40)
    throw std::invalid_argument("hyper_gap_ratio: need 1 <= n <= 40");
  auto density = [n](double theta) {
    double s = 0.0;
    double level = 1.0;  // 2^{i-1}
    for (int i = 1; i <= n; ++i) {
      s += level * std::exp(-level * theta) / n;
      level *= 2.0;
    }
    return std::sqrt(s);
  };
  auto integrand = [&](double u) { return density(u * u); };
  QuadratureResult q =
      adaptive_simpson(integrand, 0.0, 1.0 / std::sqrt(2.0), tol);

  HyperGapResult out;
  out.n = n;
  out.R = 2.0 * std::sqrt(2.0) * q.value;
  out.ratio = out.R / std::sqrt(static_cast<double>(n));
  out.error_estimate = 2.0 * std::sqrt(2.0) * q.error_estimate;
  out.nodes = q.nodes;
  return out;
}

}  // namespace varjack
