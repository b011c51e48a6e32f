// End-to-end acceptance gate: one pass/fail line per criterion, nonzero exit
// if anything fails.  Each check states the quantity, the oracle it is held
// against, and the tolerance.

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "varjack/builtins.hpp"
#include "varjack/exact.hpp"
#include "varjack/gaussian.hpp"
#include "varjack/instances.hpp"
#include "varjack/lcs_lab.hpp"
#include "varjack/mc.hpp"
#include "varjack/quadrature.hpp"

#include "literal_oracle.hpp"

using namespace varjack;

namespace {

int failures = 0;

void report(int idx, const std::string& what, bool ok,
            const std::string& detail) {
  std::printf("%s criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", idx,
              what.c_str(), detail.c_str());
  if (!ok) ++failures;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void criterion_1_identities() {
  RandomSource rng(20240801);
  double worst = 0.0;
  bool ok = true;
  for (int i = 0; i < 50; ++i) {
    auto inst = make_random_instance(rng, 8);
    auto t = correlation_table(inst.space, inst.f);
    auto r = b_and_derivatives(t);
    auto id = verify_identities(r, t);
    auto tf = t_family(t);
    const double scale = std::max(1.0, std::abs(r.variance));
    const double tres = std::abs(tf.expected_T - r.variance) / scale;
    worst = std::max({worst, id.max_residual(), tres});
    ok = ok && id.all_pass() && tres <= 1e-9;
  }
  report(1, "full identity suite on 50 randomized instances", ok,
         "worst residual " + fmt(worst) + ", tol 1e-9");
}

void criterion_2_literal_oracle() {
  RandomSource rng(4242);
  double worst = 0.0;
  for (int n = 2; n <= 5; ++n) {
    auto space = testutil::random_binary_space(n, rng);
    auto f = testutil::random_multilinear(n, rng);
    auto r = b_and_derivatives(correlation_table(space, f));
    testutil::BinaryOracle oracle(space, f);
    const auto B = oracle.literal_B();
    for (int k = 1; k <= n; ++k)
      worst = std::max(worst, std::abs(r.B[k - 1] - B[k - 1]));
    const auto DB = oracle.literal_DB();
    for (int l = 0; l < n; ++l)
      for (int k = 1; k <= n - l; ++k)
        worst = std::max(worst, std::abs(r.DB[l][k - 1] - DB[l][k - 1]));
  }
  report(2, "subset formulas equal literal permutation averages (n <= 5)",
         worst <= 1e-12, "worst gap " + fmt(worst) + ", tol 1e-12");
}

void criterion_3_interpolation() {
  RandomSource rng(30303);
  double worst = 0.0;
  int done = 0;
  bool ok = true;
  while (done < 20) {
    auto inst = make_random_instance(rng, 6);
    if (inst.space.dimension() > 6) continue;
    auto rep = interpolation_check(inst.space, inst.f);
    worst = std::max({worst, rep.reconstruction_residual,
                      rep.endpoint_residual, rep.vanish_residual,
                      rep.beta_binomial_residual});
    ok = ok && rep.pass;
    ++done;
  }
  report(3, "coupling-integral variance reconstruction on 20 instances", ok,
         "worst residual " + fmt(worst) + ", tol 1e-9");
}

void criterion_4_mc_calibration() {
  bool ok = true;
  std::string detail;
  RandomSource pick(555);
  for (int variant = 0; variant < 3; ++variant) {
    RandomInstance inst = make_random_instance(pick, 6);
    while (inst.space.dimension() > 6) inst = make_random_instance(pick, 6);
    const int n = inst.space.dimension();
    auto r = b_and_derivatives(correlation_table(inst.space, inst.f));
    for (int k : {1, n}) {
      int inside = 0;
      for (int run = 0; run < 100; ++run) {
        EstimatorConfig cfg;
        cfg.samples = 4000;
        cfg.seed = 90000 + 1000 * variant + run;
        auto e = estimate_b_k(inst.space, inst.f, k, cfg);
        if (std::abs(e.mean - r.B[k - 1]) <= 4.0 * e.std_error) ++inside;
      }
      ok = ok && inside >= 95;
      detail += fmt(inside) + "/100 ";
    }
  }
  report(4, "B_k estimator within 4 stderr of exact values", ok,
         "coverage " + detail + "(need >= 95)");
}

void criterion_5_lcs_correctness() {
  RandomSource rng(71717);
  bool ok = true;
  for (int t = 0; t < 500 && ok; ++t) {
    Word x((std::size_t)rng.uniform_index(10)), y((std::size_t)rng.uniform_index(10));
    for (int& c : x) c = (int)rng.uniform_index(3);
    for (int& c : y) c = (int)rng.uniform_index(3);
    ok = lcs_length_dp(x, y) == lcs_brute_oracle(x, y);
  }
  BitParallelLcs bp(3);
  for (int t = 0; t < 10000 && ok; ++t) {
    Word x(1 + (std::size_t)rng.uniform_index(260));
    Word y(1 + (std::size_t)rng.uniform_index(260));
    for (int& c : x) c = (int)rng.uniform_index(3);
    for (int& c : y) c = (int)rng.uniform_index(3);
    ok = bp.length(x, y) == lcs_length_dp(x, y);
  }
  for (int t = 0; t < 300 && ok; ++t) {
    Word x(60), y(60);
    for (int& c : x) c = (int)rng.uniform_index(2);
    for (int& c : y) c = (int)rng.uniform_index(2);
    const int before = lcs_length(x, y);
    x[rng.uniform_index(60)] ^= 1;
    ok = std::abs(lcs_length(x, y) - before) <= 1;
  }
  report(5, "LCS: dp = brute force, bit-parallel = dp, flips in {-1,0,1}", ok,
         "500 + 10000 + 300 randomized pairs, exact equality");
}

void criterion_6_upper_bounds() {
  bool ok = true;
  std::string detail;
  // exact enumeration, uniform binary, n <= 4
  for (int n = 1; n <= 4; ++n) {
    auto space = ProductSpace::iid(FiniteDistribution::uniform(2), 2 * n);
    const double var = exact_variance(space, make_lcs_function(n, 2));
    ok = ok && var <= n / 4.0;
  }
  detail += "exact n<=4 ok; ";
  EstimatorConfig cfg;
  cfg.samples = 2000;
  cfg.seed = 66;
  auto bin = upper_bound_report(LcsModel::uniform_binary(200), cfg);
  const bool bin_ok =
      bin.empirical_variance.mean <=
      bin.bound_quarter + 4.0 * bin.empirical_variance.std_error;
  ok = ok && bin_ok && bin.symmetry_flag;
  detail += "binary n=200: " + fmt(bin.empirical_variance.mean) + " <= 50; ";
  // 4-letter alphabet: exact at n = 3, empirical at n = 200
  {
    auto space = ProductSpace::iid(FiniteDistribution::uniform(4), 6);
    const double var = exact_variance(space, make_lcs_function(3, 4));
    ok = ok && var <= 0.375 * 3;
    auto four = upper_bound_report(
        LcsModel(200, FiniteDistribution::uniform(4), FiniteDistribution::uniform(4)),
        cfg);
    ok = ok && four.empirical_variance.mean <=
                   four.bound_alphabet +
                       4.0 * four.empirical_variance.std_error;
    detail += "4-letter n=200: " + fmt(four.empirical_variance.mean) +
              " <= " + fmt(four.bound_alphabet);
  }
  report(6, "variance upper bounds n/4 and (1 - sum p^2) n/2", ok, detail);
}

void criterion_7_varsup() {
  const double v = varsup_constant(0.096, 0.8263);
  // closed form pinned by an independent high-precision evaluation
  const double pinned = 1.852911989020684e-8;
  const bool ok = v >= 1.8e-8 && std::abs(v - pinned) <= 1e-12 * pinned;
  report(7, "explicit lower-bound constant for biased binary alphabets", ok,
         fmt(v) + " >= 1.8e-8, matches pinned value");
}

void criterion_8_symmetry_zero() {
  EstimatorConfig cfg;
  cfg.samples = 120000;
  cfg.seed = 88;
  auto sym = blast_lcs_estimate(LcsModel::uniform_binary(6), cfg);
  bool ok = std::abs(sym.b_last.mean) <= 4.0 * sym.b_last.std_error;
  std::string detail = "uniform: " + fmt(sym.b_last.mean) + " +- " +
                       fmt(sym.b_last.std_error);
  cfg.samples = 400000;
  for (int n = 2; n <= 4; ++n) {
    LcsModel biased(n, FiniteDistribution::bernoulli(0.3),
                    FiniteDistribution::bernoulli(0.3));
    auto space = ProductSpace::iid(FiniteDistribution::bernoulli(0.3), 2 * n);
    auto r = b_and_derivatives(correlation_table(space, make_lcs_function(n, 2)));
    auto est = blast_lcs_estimate(biased, cfg);
    ok = ok && std::abs(est.b_last.mean - r.B[2 * n - 1]) <=
                   4.0 * est.b_last.std_error;
  }
  report(8, "top-level weight: zero under symmetry, exact match when biased",
         ok, detail + "; biased n=2..4 vs enumeration");
}

void criterion_9_block_statistic() {
  bool ok = true;
  std::string detail;
  const std::vector<int> grid{20, 60, 100, 150, 200};
  struct SpecDef {
    int b;
    Word w1, w2;
  };
  for (const SpecDef& sd :
       {SpecDef{2, {1, 0}, {1, 1}}, SpecDef{5, {1, 0, 1, 0, 1}, {1, 1, 1, 1, 1}}}) {
    std::vector<double> ys;
    for (int n : grid) {
      PerturbationSpec spec;
      spec.b = sd.b;
      spec.w1 = sd.w1;
      spec.w2 = sd.w2;
      EstimatorConfig cfg;
      cfg.samples = 100000;
      cfg.seed = 9000 + n + 31 * sd.b;
      cfg.threads = 4;
      cfg.streams = 32;
      auto e = cell_statistic(LcsModel::uniform_binary(n), spec, cfg);
      ok = ok && e.mean >= 5.0 * e.std_error;  // strictly positive signal
      ys.push_back(e.mean);
    }
    // the statistic has a genuine transient decay from n = 20, so "stable"
    // is a positive-floor check: no halving over the last doubling of n and
    // no collapse relative to the head of the grid
    ok = ok && ys.back() >= 0.5 * ys[2] && ys.back() >= 0.3 * ys.front();
    detail += "b=" + fmt(sd.b) + " stat(20)=" + fmt(ys.front()) +
              " stat(200)=" + fmt(ys.back()) + "; ";
  }
  report(9, "block statistic positive and stable across n = 20..200", ok,
         detail + "10^5 replicas per point");
}

void criterion_10_gaussian_limits() {
  bool ok = true;
  PolynomialG sq({0.0, 0.0, 1.0});
  for (int n : {2, 10, 25, 50}) {
    auto jk = rademacher_jackknife(sq, n, 1);
    ok = ok && std::abs(std::abs(jk.J[0] - 4.0) - 4.0 / n) <= 1e-12;
  }
  RandomSource rng(101);
  double worst_series = 0.0;
  for (int trial = 0; trial < 8; ++trial) {
    const int d = 1 + (int)rng.uniform_index(4);
    std::vector<double> c(d + 1);
    for (double& v : c) v = 2.0 * rng.uniform() - 1.0;
    if (std::abs(c[d]) < 0.1) c[d] = 0.4;
    PolynomialG g(std::move(c));
    auto res = gaussian_series_residuals(g);
    worst_series = std::max(worst_series, res.max_residual());
    auto rows = convergence_table(g, {10, 20, 40, 80}, 3);
    for (int k = 1; k <= 3; ++k) {
      double prev_j = 1e300, prev_k = 1e300;
      for (const auto& row : rows)
        if (row.k == k) {
          ok = ok && row.gap_J <= prev_j + 1e-12 && row.gap_K <= prev_k + 1e-12;
          prev_j = row.gap_J;
          prev_k = row.gap_K;
        }
    }
  }
  ok = ok && worst_series <= 1e-12;
  report(10, "Gaussian limits: exact 4/n gap, shrinking gaps, series identities",
         ok, "worst series residual " + fmt(worst_series));
}

void criterion_11_hoeffding() {
  double worst = 0.0;
  RandomSource rng(111);
  for (int n : {3, 5, 8}) {
    HoeffdingSpec spec;
    spec.n = n;
    spec.targets.resize(n);
    for (double& a : spec.targets) a = 5.0 * rng.uniform();
    auto hc = hoeffding_construct(spec);
    auto r = b_and_derivatives(correlation_table(rademacher_space(n), hc.S));
    for (int k = 1; k <= n; ++k)
      worst = std::max(
          worst, std::abs(factorial(k) * r.Kp[k - 1] - spec.targets[k - 1]) /
                     std::max(1.0, spec.targets[k - 1]));
  }
  report(11, "prescribed jackknife values attained (n <= 8)", worst <= 1e-9,
         "worst relative round-trip gap " + fmt(worst) + ", tol 1e-9");
}

void criterion_12_talagrand() {
  const int n = 10;
  auto sp = bernoulli_space(n);
  bool ok = true;
  for (auto f : {make_dictator(n), make_tribes(n, 2), make_product_of_prefix(n, 1),
                 make_product_of_prefix(n, 2), make_product_of_prefix(n, 5),
                 make_product_of_prefix(n, 10)}) {
    auto rep = weak_talagrand_check(sp, f);
    ok = ok && rep.variance <= rep.bound + 1e-12;
  }
  // half-length prefix product: the bound beats the benchmark rate
  // (1/4) (1/2)^{n/2 - 1} by at least a factor n/4
  auto rep = weak_talagrand_check(sp, make_product_of_prefix(n, n / 2));
  const double benchmark = 0.25 * std::pow(0.5, n / 2.0 - 1.0);
  const double factor = rep.bound / benchmark;
  ok = ok && factor >= n / 4.0;
  report(12, "weak Talagrand bound holds; half-prefix factor vs benchmark", ok,
         "factor " + fmt(factor) + " >= " + fmt(n / 4.0));
}

void criterion_13_hyper_gap() {
  bool ok = true;
  double worst_ratio = 1e300;
  for (int n = 1; n <= 20; ++n) {
    auto h = hyper_gap_ratio(n);
    worst_ratio = std::min(worst_ratio, h.ratio);
    ok = ok && h.ratio >= 0.5099;
  }
  const double pinned = 1.8451240256511698;  // independent quadrature
  const double r1 = hyper_gap_ratio(1).R;
  ok = ok && std::abs(r1 - pinned) <= 1e-6;
  report(13, "level-gap integral: ratio floor and pinned R(1)", ok,
         "min ratio " + fmt(worst_ratio) + ", R(1) = " + fmt(r1));
}

}  // namespace

int main() {
  criterion_1_identities();
  criterion_2_literal_oracle();
  criterion_3_interpolation();
  criterion_4_mc_calibration();
  criterion_5_lcs_correctness();
  criterion_6_upper_bounds();
  criterion_7_varsup();
  criterion_8_symmetry_zero();
  criterion_9_block_statistic();
  criterion_10_gaussian_limits();
  criterion_11_hoeffding();
  criterion_12_talagrand();
  criterion_13_hyper_gap();
  if (failures) {
    std::printf("%d criterion(s) FAILED\n", failures);
    return 1;
  }
  std::printf("all 13 criteria passed\n");
  return 0;
}
