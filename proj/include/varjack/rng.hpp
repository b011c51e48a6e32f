#pragma once

#include <cstdint>
#include <limits>

namespace varjack {

// Counter-based seeding: a (seed, stream) pair fully determines the output
// sequence, and distinct streams decorrelate through two rounds of
// splitmix64 before the generator state is built.  Each RandomSource is
// owned by exactly one worker; parallel code assigns stream = task index so
// scheduling order cannot change results.
class RandomSource {
 public:
  RandomSource(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {
    std::uint64_t x = seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
    s0_ = splitmix(x);
    s1_ = splitmix(x);
    s2_ = splitmix(x);
    s3_ = splitmix(x);
    if ((s0_ | s1_ | s2_ | s3_) == 0) s0_ = 1;  // xoshiro forbids all-zero
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  // xoshiro256** next
  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s1_ * 5, 7) * 9;
    const std::uint64_t t = s1_ << 17;
    s2_ ^= s0_;
    s3_ ^= s1_;
    s1_ ^= s2_;
    s0_ ^= s3_;
    s2_ ^= t;
    s3_ = rotl(s3_, 45);
    return result;
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n), n >= 1; unbiased via rejection
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

 private:
  static std::uint64_t splitmix(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t seed_, stream_;
  std::uint64_t s0_, s1_, s2_, s3_;
};

}  // namespace varjack
