#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "varjack/builtins.hpp"
#include "varjack/combinatorics.hpp"
#include "varjack/model.hpp"
#include "varjack/rng.hpp"

using namespace varjack;

TEST_CASE("rng determinism and stream separation") {
  RandomSource a(42, 0), b(42, 0), c(42, 1);
  bool differ = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    if (x != c.next_u64()) differ = true;
  }
  CHECK(differ);
}

TEST_CASE("rng uniform ranges") {
  RandomSource r(7);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(r.uniform_index(5) < 5);
  }
  // uniform_index(1) is always 0
  CHECK(r.uniform_index(1) == 0);
}

TEST_CASE("finite distribution validation") {
  CHECK_THROWS(FiniteDistribution({}, {}));
  CHECK_THROWS(FiniteDistribution({0, 1}, {0.5}));
  CHECK_THROWS(FiniteDistribution({0, 0}, {0.5, 0.5}));
  CHECK_THROWS(FiniteDistribution({0, 1}, {-0.1, 1.1}));
  CHECK_THROWS(FiniteDistribution({0, 1}, {0.3, 0.3}));
  const auto d = FiniteDistribution::uniform(3);
  CHECK(d.support_size() == 3);
  CHECK(d.prob_of_atom(2) == doctest::Approx(1.0 / 3));
  CHECK_THROWS(d.prob_of_atom(9));
}

TEST_CASE("distribution sampling hits the right frequencies") {
  const auto d = FiniteDistribution::bernoulli(0.25);
  RandomSource rng(3);
  int ones = 0;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) ones += d.sample(rng);
  CHECK(std::abs(ones / double(trials) - 0.25) < 0.01);
}

TEST_CASE("resample and delta_eval") {
  Configuration c{0, 0, 0}, r{1, 1, 1};
  CHECK(resample(c, 0b101, r) == Configuration{1, 0, 1});
  CHECK_THROWS(resample(c, 0b1000, r));

  const auto f = make_additive(3, ValueTable::identity(2));
  // Delta over {0}: S - S^{0} = c0 - r0 = -1
  CHECK(delta_eval(f, c, r, 0b001) == doctest::Approx(-1.0));
  // Delta over {0,1}: S - S^0 - S^1 + S^{01}; additive cross term cancels
  CHECK(delta_eval(f, c, r, 0b011) == doctest::Approx(0.0));
  CHECK_THROWS(delta_eval(f, c, r, 0));
}

TEST_CASE("builtins spot values") {
  const auto parity = make_parity(3);
  CHECK(parity({1, 1, 1}) == doctest::Approx(1.0));
  CHECK(parity({0, 1, 1}) == doctest::Approx(-1.0));

  const auto prefix = make_product_of_prefix(4, 2);
  CHECK(prefix({1, 1, 0, 0}) == doctest::Approx(1.0));
  CHECK(prefix({1, 0, 1, 1}) == doctest::Approx(0.0));
  CHECK_THROWS(make_product_of_prefix(4, 5));

  const auto tribes = make_tribes(4, 2);
  CHECK(tribes({1, 1, 0, 0}) == doctest::Approx(1.0));
  CHECK(tribes({1, 0, 0, 1}) == doctest::Approx(0.0));
  CHECK_THROWS(make_tribes(5, 2));

  const auto dict = make_dictator(3, 1);
  CHECK(dict({0, 1, 0}) == doctest::Approx(1.0));

  std::map<SubsetMask, double> coeffs{{0b11, 2.0}, {0, 1.0}};
  const auto ml = make_multilinear(2, coeffs, ValueTable::identity(2));
  CHECK(ml({1, 1}) == doctest::Approx(3.0));
  CHECK(ml({1, 0}) == doctest::Approx(1.0));

  // e_1 + e_2 on signs: (a+b) + ab
  const auto sym = make_symmetric_poly(2, {1.0, 1.0});
  CHECK(sym({1, 1}) == doctest::Approx(3.0));
  CHECK(sym({0, 1}) == doctest::Approx(-1.0));
}

TEST_CASE("combinatorics helpers") {
  CHECK(binom(10, 3) == doctest::Approx(120.0));
  CHECK(binom(5, 0) == doctest::Approx(1.0));
  CHECK(binom(5, 6) == doctest::Approx(0.0));
  CHECK(binom(62, 31) == doctest::Approx(465428353255261088.0));
  CHECK(factorial(6) == doctest::Approx(720.0));
  CHECK(gaussian_moment(4) == doctest::Approx(3.0));
  CHECK(gaussian_moment(6) == doctest::Approx(15.0));
  CHECK(gaussian_moment(5) == doctest::Approx(0.0));
  // integral of x^2 (1-x) over [0,1] = 1/12
  CHECK(beta_integral(2, 1) == doctest::Approx(1.0 / 12));
}

TEST_CASE("product space bookkeeping") {
  auto sp = uniform_space(4, 3);
  CHECK(sp.dimension() == 4);
  CHECK(sp.state_bits() == doctest::Approx(4 * std::log2(3.0)));
  RandomSource rng(1);
  const auto c = draw_config(sp, rng);
  CHECK(c.size() == 4);
  for (int a : c) CHECK((a >= 0 && a < 3));
}
