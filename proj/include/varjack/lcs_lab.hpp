#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "varjack/lcs.hpp"
#include "varjack/mc.hpp"
#include "varjack/model.hpp"

namespace varjack {

// Random word model: X_1..X_n and Y_1..Y_n i.i.d. from (possibly different)
// finite alphabets.
struct LcsModel {
  int n = 0;
  FiniteDistribution x_dist;
  FiniteDistribution y_dist;

  LcsModel() = default;
  LcsModel(int len, FiniteDistribution xd, FiniteDistribution yd)
      : n(len), x_dist(std::move(xd)), y_dist(std::move(yd)) {
    if (n < 1) throw std::invalid_argument("word length must be >= 1");
    x_dist.validate();
    y_dist.validate();
  }

  static LcsModel uniform_binary(int len) {
    return LcsModel(len, FiniteDistribution::uniform(2),
                    FiniteDistribution::uniform(2));
  }

  int alphabet() const {
    int sigma = 0;
    for (int a : x_dist.atoms) sigma = std::max(sigma, a + 1);
    for (int a : y_dist.atoms) sigma = std::max(sigma, a + 1);
    return sigma;
  }

  Word draw_x(RandomSource& rng) const {
    Word w(n);
    for (int i = 0; i < n; ++i) w[i] = x_dist.sample(rng);
    return w;
  }
  Word draw_y(RandomSource& rng) const {
    Word w(n);
    for (int i = 0; i < n; ++i) w[i] = y_dist.sample(rng);
    return w;
  }
};

// Block replacement pair (w1, w2) for the cell statistic.
struct PerturbationSpec {
  int b = 1;
  Word w1, w2;
  bool paired_letters = false;  // b=1 mode on Z_i = (X_i, Y_i); w gives (x, y)
  int replicas = 2;

  void validate(int n) const {
    if (b < 1) throw std::invalid_argument("block length must be >= 1");
    if (paired_letters) {
      if (b != 1 || w1.size() != 2 || w2.size() != 2)
        throw std::invalid_argument(
            "paired-letter mode needs b = 1 and (x, y) replacement pairs");
      return;
    }
    if (static_cast<int>(w1.size()) != b || static_cast<int>(w2.size()) != b)
      throw std::invalid_argument("replacement words must have length b");
    if (n % b != 0)
      throw std::invalid_argument("block length must divide word length");
  }
};

namespace detail {

inline double lcs_eval(BitParallelLcs& bp, const Word& x, const Word& y) {
  return static_cast<double>(bp.length(x, y));
}

}  // namespace detail

// Unbiased estimate of B_1(2n) = (1/(2*2n)) sum_j E[(Delta_j LC)^2]: resample
// one uniformly chosen letter of the 2n-letter pair and return Delta^2 / 2.
inline Estimate b1_lcs_estimate(const LcsModel& model,
                                const EstimatorConfig& cfg) {
  const int n = model.n;
  const int sigma = model.alphabet();
  Estimate e = estimate_mean(cfg, [&, n, sigma](RandomSource& rng) {
    BitParallelLcs bp(sigma);
    Word x = model.draw_x(rng);
    Word y = model.draw_y(rng);
    const double before = detail::lcs_eval(bp, x, y);
    const int j = static_cast<int>(rng.uniform_index(2ull * n));
    if (j < n)
      x[j] = model.x_dist.sample(rng);
    else
      y[j - n] = model.y_dist.sample(rng);
    const double after = detail::lcs_eval(bp, x, y);
    const double d = before - after;
    if (std::abs(d) > 1.0 + 1e-12)
      throw std::logic_error("single-letter flip changed LCS by more than 1");
    return 0.5 * d * d;
  });
  e.negative_warning = e.mean < 0.0;
  return e;
}

struct BlastReport {
  Estimate b_last;            // estimate of B_{2n}(2n)
  Estimate variance_lower;    // 2n * B_{2n}, Var LC_n >= this
};

// B_{2n}(2n) = (1/2n) sum_k (E[LCS(Z^{k,1}) - LCS(Z^{k,0})])^2 p_k(1 - p_k)
// for binary alphabets; the squared mean per index is estimated without bias
// as a product of two conditionally independent replicas.
inline BlastReport blast_lcs_estimate(const LcsModel& model,
                                      const EstimatorConfig& cfg) {
  if (model.x_dist.atoms != std::vector<int>{0, 1} ||
      model.y_dist.atoms != std::vector<int>{0, 1})
    throw std::invalid_argument("blast estimator needs binary alphabets");
  const int n = model.n;
  const double px = model.x_dist.prob_of_atom(1);
  const double py = model.y_dist.prob_of_atom(1);

  Estimate stat = paired_square_mean(cfg, [&, n](RandomSource& rng) {
    BitParallelLcs bp(2);
    const int k = static_cast<int>(rng.uniform_index(2ull * n));
    const bool x_side = k < n;
    const int pos = x_side ? k : k - n;
    auto effect = [&](Word x, Word y) {
      int& slot = x_side ? x[pos] : y[pos];
      slot = 1;
      const double hi = detail::lcs_eval(bp, x, y);
      slot = 0;
      const double lo = detail::lcs_eval(bp, x, y);
      return hi - lo;
    };
    const double d1 = effect(model.draw_x(rng), model.draw_y(rng));
    const double d2 = effect(model.draw_x(rng), model.draw_y(rng));
    const double pq = x_side ? px * (1.0 - px) : py * (1.0 - py);
    return std::pair<double, double>(d1 * pq, d2);
  });

  BlastReport rep;
  rep.b_last = stat;
  rep.variance_lower = stat;
  rep.variance_lower.mean *= 2.0 * n;
  rep.variance_lower.std_error *= 2.0 * n;
  return rep;
}

// Block / paired-letter cell statistic of the lower-bound construction:
// (1/n_blocks) sum_j (E[LCS(Z^{j,w1}) - LCS(Z^{j,w2})])^2.  In paired-letter
// mode the caller divides by 4 to read off B_n(n).
inline Estimate cell_statistic(const LcsModel& model,
                               const PerturbationSpec& spec,
                               const EstimatorConfig& cfg) {
  spec.validate(model.n);
  const int n = model.n;
  const int sigma = std::max(model.alphabet(), 2);
  const int blocks = spec.paired_letters ? n : n / spec.b;

  return paired_square_mean(cfg, [&, n, sigma, blocks](RandomSource& rng) {
    BitParallelLcs bp(sigma);
    const int j = static_cast<int>(rng.uniform_index(blocks));
    auto effect = [&](Word x, Word y) {
      if (spec.paired_letters) {
        x[j] = spec.w1[0];
        y[j] = spec.w1[1];
        const double a = detail::lcs_eval(bp, x, y);
        x[j] = spec.w2[0];
        y[j] = spec.w2[1];
        return a - detail::lcs_eval(bp, x, y);
      }
      for (int t = 0; t < spec.b; ++t) x[j * spec.b + t] = spec.w1[t];
      const double a = detail::lcs_eval(bp, x, y);
      for (int t = 0; t < spec.b; ++t) x[j * spec.b + t] = spec.w2[t];
      return a - detail::lcs_eval(bp, x, y);
    };
    const double d1 = effect(model.draw_x(rng), model.draw_y(rng));
    const double d2 = effect(model.draw_x(rng), model.draw_y(rng));
    return std::pair<double, double>(d1, d2);
  });
}

struct OmittedLetterReport {
  Estimate delta_e;        // E LC_n - E LC_{n-1,n}, coupled
  double p = 0.0;          // probability of the omitted x-letter
  double b2n_linear = 0.0;     // (1/4) * delta_e * p, as displayed
  double b2n_quadratic = 0.0;  // (1/4) * delta_e^2 * p, as derived
  double variance_lower_linear = 0.0;     // 2n * b2n
  double variance_lower_quadratic = 0.0;
};

// Omitted-letter construction: the x-alphabet has one letter the y-alphabet
// never uses.  LC_{n-1,n} drops the last x-letter of the same sample, so the
// difference estimator is coupled and nonnegative term by term.
inline OmittedLetterReport omitted_letter_bound(const LcsModel& model,
                                                int omitted_letter,
                                                const EstimatorConfig& cfg) {
  for (int a : model.y_dist.atoms)
    if (a == omitted_letter)
      throw std::invalid_argument("omitted letter appears in the y-alphabet");
  const double p = model.x_dist.prob_of_atom(omitted_letter);
  if (p <= 0.0)
    throw std::invalid_argument("omitted letter must have positive mass");
  const int sigma = model.alphabet();

  OmittedLetterReport rep;
  rep.p = p;
  rep.delta_e = estimate_mean(cfg, [&, sigma](RandomSource& rng) {
    BitParallelLcs bp(sigma);
    const Word x = model.draw_x(rng);
    const Word y = model.draw_y(rng);
    const double full = detail::lcs_eval(bp, x, y);
    Word x_trim(x.begin(), x.end() - 1);
    return full - detail::lcs_eval(bp, x_trim, y);
  });
  const double de = rep.delta_e.mean;
  rep.b2n_linear = 0.25 * de * p;
  rep.b2n_quadratic = 0.25 * de * de * p;
  rep.variance_lower_linear = 2.0 * model.n * rep.b2n_linear;
  rep.variance_lower_quadratic = 2.0 * model.n * rep.b2n_quadratic;
  return rep;
}

struct LcsVarianceReport {
  int n = 0;
  Estimate empirical_variance;
  double bound_quarter = 0.0;   // n/4, needs the symmetry condition
  double bound_alphabet = 0.0;  // (1 - sum p_k^2) * n / 2
  bool symmetry_flag = false;   // uniform alphabet on both sides
};

inline Estimate lcs_variance_estimate(const LcsModel& model,
                                      const EstimatorConfig& cfg) {
  const int sigma = model.alphabet();
  Estimate e = estimate_mean(cfg, [&, sigma](RandomSource& rng) {
    BitParallelLcs bp(sigma);
    const double a = detail::lcs_eval(bp, model.draw_x(rng), model.draw_y(rng));
    const double b = detail::lcs_eval(bp, model.draw_x(rng), model.draw_y(rng));
    const double d = a - b;
    return 0.5 * d * d;
  });
  e.negative_warning = e.mean < 0.0;
  return e;
}

inline LcsVarianceReport upper_bound_report(const LcsModel& model,
                                            const EstimatorConfig& cfg) {
  LcsVarianceReport rep;
  rep.n = model.n;
  rep.empirical_variance = lcs_variance_estimate(model, cfg);

  double sum_p2 = 0.0;
  for (double p : model.x_dist.probs) sum_p2 += p * p;
  rep.bound_alphabet = (1.0 - sum_p2) * model.n / 2.0;
  rep.bound_quarter = model.n / 4.0;

  auto uniform = [](const FiniteDistribution& d) {
    for (double p : d.probs)
      if (std::abs(p - 1.0 / d.probs.size()) > 1e-12) return false;
    return true;
  };
  rep.symmetry_flag = uniform(model.x_dist) && uniform(model.y_dist) &&
                      model.x_dist.atoms == model.y_dist.atoms;
  return rep;
}

// Explicit constant of the variance lower bound for biased binary alphabets:
// 2 p0 (1 - p0) ((gamma_low(p0) - gamma_half_upper) / (1/2 - p0))^2 with
// gamma_low(p) = p^2 + (1 - p)^2.
inline double varsup_constant(double p0, double gamma_half_upper) {
  if (!(p0 > 0.0 && p0 < 0.5))
    throw std::invalid_argument("need 0 < p0 < 1/2");
  const double gamma_low = p0 * p0 + (1.0 - p0) * (1.0 - p0);
  if (gamma_low < gamma_half_upper)
    throw std::invalid_argument(
        "hypothesis not certified: p0^2 + (1-p0)^2 = " +
        std::to_string(gamma_low) + " does not exceed the gamma(1/2) bound");
  const double slope = (gamma_low - gamma_half_upper) / (0.5 - p0);
  return 2.0 * p0 * (1.0 - p0) * slope * slope;
}

}  // namespace varjack
