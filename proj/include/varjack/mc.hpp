#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "varjack/model.hpp"
#include "varjack/rng.hpp"

namespace varjack {

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;  // "stderr" is a stdio macro, hence the name
  std::uint64_t count = 0;
  bool negative_warning = false;  // nonnegative target estimated negative

  std::pair<double, double> ci95() const {
    const double h = 1.959963984540054 * std_error;
    return {mean - h, mean + h};
  }
};

struct EstimatorConfig {
  std::uint64_t samples = 10000;
  std::uint64_t seed = 1;
  int streams = 16;
  int threads = 1;
};

// Deterministic sharded mean estimator.  Samples are split across `streams`
// independent generators; per-stream partial sums are merged in stream order,
// so the result depends on (samples, seed, streams) but never on `threads`.
template <class Kernel>
Estimate estimate_mean(const EstimatorConfig& cfg, Kernel&& kernel) {
  if (cfg.samples < 2) throw std::invalid_argument("need at least 2 samples");
  if (cfg.streams < 1) throw std::invalid_argument("streams must be >= 1");
  const int streams = cfg.streams;

  struct Partial {
    double sum = 0.0, sumsq = 0.0;
    std::uint64_t count = 0;
  };
  std::vector<Partial> parts(streams);

  auto run_stream = [&](int s) {
    const std::uint64_t base = cfg.samples / streams;
    const std::uint64_t cnt =
        base + (static_cast<std::uint64_t>(s) < cfg.samples % streams ? 1 : 0);
    RandomSource rng(cfg.seed, static_cast<std::uint64_t>(s));
    Partial p;
    for (std::uint64_t i = 0; i < cnt; ++i) {
      const double v = kernel(rng);
      p.sum += v;
      p.sumsq += v * v;
    }
    p.count = cnt;
    parts[s] = p;
  };

  const int workers = std::max(1, std::min(cfg.threads, streams));
  if (workers == 1) {
    for (int s = 0; s < streams; ++s) run_stream(s);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int s = w; s < streams; s += workers) run_stream(s);
      });
    for (auto& t : pool) t.join();
  }

  double sum = 0.0, sumsq = 0.0;
  std::uint64_t count = 0;
  for (const Partial& p : parts) {  // stream order, not completion order
    sum += p.sum;
    sumsq += p.sumsq;
    count += p.count;
  }

  Estimate e;
  e.count = count;
  e.mean = sum / static_cast<double>(count);
  const double ss = std::max(0.0, sumsq - count * e.mean * e.mean);
  e.std_error = std::sqrt(ss / (static_cast<double>(count) - 1.0) /
                          static_cast<double>(count));
  return e;
}

// Unbiased variance estimate from independent pairs: E[(S - S')^2] / 2.
inline Estimate estimate_variance(const ProductSpace& space,
                                  const CoordFunction& f,
                                  const EstimatorConfig& cfg) {
  Estimate e = estimate_mean(cfg, [&](RandomSource& rng) {
    const double a = f(draw_config(space, rng));
    const double b = f(draw_config(space, rng));
    const double d = a - b;
    return 0.5 * d * d;
  });
  e.negative_warning = e.mean < 0.0;
  return e;
}

// Single-permutation unbiased estimator of B_k: draw X, X', a uniform random
// injective k-tuple (i_1..i_k), and return S(X) times the difference of S at
// X with the first k-1 / first k indices resampled from X'.
inline Estimate estimate_b_k(const ProductSpace& space, const CoordFunction& f,
                             int k, const EstimatorConfig& cfg) {
  const int n = space.dimension();
  if (k < 1 || k > n) throw std::invalid_argument("estimate_b_k: k out of range");
  Estimate e = estimate_mean(cfg, [&, n, k](RandomSource& rng) {
    const Configuration x = draw_config(space, rng);
    const Configuration r = draw_config(space, rng);
    // partial Fisher-Yates: first k entries form the injective tuple
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    for (int i = 0; i < k; ++i) {
      const auto j =
          i + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n - i)));
      std::swap(idx[i], idx[j]);
    }
    Configuration y = x;
    for (int i = 0; i + 1 < k; ++i) y[idx[i]] = r[idx[i]];
    const double s_prefix = f(y);  // k = 1: empty prefix, S itself
    y[idx[k - 1]] = r[idx[k - 1]];
    const double s_full = f(y);
    return f(x) * (s_prefix - s_full);
  });
  e.negative_warning = e.mean < 0.0;
  return e;
}

// (E Delta)^2 averaged over a conditioning index, estimated without bias as
// E[Delta * Delta'] with the two replicas independent given the shared index.
// The sampler draws one such pair per call.
template <class PairSampler>
Estimate paired_square_mean(const EstimatorConfig& cfg, PairSampler&& sampler) {
  Estimate e = estimate_mean(cfg, [&](RandomSource& rng) {
    const std::pair<double, double> d = sampler(rng);
    return d.first * d.second;
  });
  e.negative_warning = e.mean < 0.0;
  return e;
}

}  // namespace varjack
