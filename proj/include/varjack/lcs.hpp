#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace varjack {

// Letters are small non-negative alphabet ids.
using Word = std::vector<int>;

// Reference O(|x| * |y|) dynamic program; the semantic definition.
inline int lcs_length_dp(const Word& x, const Word& y) {
  const std::size_t m = x.size(), n = y.size();
  if (m == 0 || n == 0) return 0;
  std::vector<int> prev(n + 1, 0), cur(n + 1, 0);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      if (x[i - 1] == y[j - 1])
        cur[j] = prev[j - 1] + 1;
      else
        cur[j] = std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

// Bit-parallel LCS (Allison-Dix column encoding, multi-word).  Identical to
// the DP on all inputs; this is the fast path the perturbation estimators
// rely on (~10^6-10^7 evaluations per experiment).
class BitParallelLcs {
 public:
  // alphabet_size: ids in [0, alphabet_size)
  explicit BitParallelLcs(int alphabet_size) : sigma_(alphabet_size) {}

  int length(const Word& x, const Word& y) {
    const std::size_t m = x.size();
    if (m == 0 || y.empty()) return 0;
    const std::size_t words = (m + 63) / 64;
    match_.assign(static_cast<std::size_t>(sigma_) * words, 0);
    for (std::size_t i = 0; i < m; ++i) {
      const int c = x[i];
      if (c < 0 || c >= sigma_) throw std::invalid_argument("letter out of alphabet");
      match_[static_cast<std::size_t>(c) * words + i / 64] |= 1ULL << (i % 64);
    }
    row_.assign(words, 0);
    shifted_.assign(words, 0);
    for (int c : y) {
      if (c < 0 || c >= sigma_) throw std::invalid_argument("letter out of alphabet");
      const std::uint64_t* pm = &match_[static_cast<std::size_t>(c) * words];
      // shifted = (row << 1) | 1
      std::uint64_t carry = 1;
      for (std::size_t w = 0; w < words; ++w) {
        shifted_[w] = (row_[w] << 1) | carry;
        carry = row_[w] >> 63;
      }
      // row' = u & ~(u - shifted), u = row | pm, with multi-word borrow
      std::uint64_t borrow = 0;
      for (std::size_t w = 0; w < words; ++w) {
        const std::uint64_t u = row_[w] | pm[w];
        const std::uint64_t s = shifted_[w];
        const std::uint64_t d0 = u - s;
        const std::uint64_t d = d0 - borrow;
        borrow = (u < s) || (d0 < borrow) ? 1 : 0;
        row_[w] = u & ~d;
      }
    }
    // mask bits beyond m in the top word
    if (m % 64 != 0) row_[words - 1] &= (1ULL << (m % 64)) - 1;
    int count = 0;
    for (std::uint64_t w : row_) count += __builtin_popcountll(w);
    return count;
  }

 private:
  int sigma_;
  std::vector<std::uint64_t> match_, row_, shifted_;
};

// Convenience wrapper: picks the alphabet from the data.
inline int lcs_length(const Word& x, const Word& y) {
  int sigma = 1;
  for (int c : x) sigma = std::max(sigma, c + 1);
  for (int c : y) sigma = std::max(sigma, c + 1);
  BitParallelLcs bp(sigma);
  return bp.length(x, y);
}

// Exhaustive oracle: maximum length over all subsequences of x that are also
// subsequences of y.  Test-only cost, hence the length cap.
inline int lcs_brute_oracle(const Word& x, const Word& y) {
  if (x.size() > 12) throw std::invalid_argument("brute oracle: |x| > 12");
  const std::size_t m = x.size();
  int best = 0;
  for (std::uint32_t sub = 0; sub < (1u << m); ++sub) {
    const int len = __builtin_popcount(sub);
    if (len <= best) continue;
    // check the selected subsequence of x against y greedily
    std::size_t j = 0;
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i) {
      if (!(sub & (1u << i))) continue;
      while (j < y.size() && y[j] != x[i]) ++j;
      if (j == y.size())
        ok = false;
      else
        ++j;
    }
    if (ok) best = len;
  }
  return best;
}

}  // namespace varjack
