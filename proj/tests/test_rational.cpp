#include <gtest/gtest.h>

#include <atomic>
#include <stdexcept>

#include "klyshko/parallel.hpp"
#include "klyshko/random.hpp"
#include "klyshko/rational.hpp"

using namespace klyshko;

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-7"), Rational(-7));
  EXPECT_EQ(to_string(Rational(-4, 6)), "-2/3");
  EXPECT_EQ(to_string(Rational(5)), "5");
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1/x"), std::invalid_argument);
  EXPECT_THROW(parse_rational(""), std::invalid_argument);
}

TEST(Rational, ComplexArithmetic) {
  const ComplexRational a(Rational(1, 2), Rational(-3)), b(Rational(2), Rational(1, 3));
  const auto q = a / b;
  EXPECT_EQ(q * b, a);
  EXPECT_EQ(ComplexRational::i() * ComplexRational::i(), ComplexRational(-1));
  EXPECT_EQ(a.conj().im, Rational(3));
  EXPECT_TRUE((a - a).is_zero());
  EXPECT_THROW(a / ComplexRational(), std::domain_error);
}

TEST(Rational, PowersOfI) {
  for (int k = -8; k <= 8; ++k) EXPECT_EQ(i_pow(k) * i_pow(-k), ComplexRational(1)) << k;
  EXPECT_EQ(i_pow(3), ComplexRational(Rational(0), Rational(-1)));
}

TEST(Rational, Binomial) {
  EXPECT_EQ(binomial(8, 4), 70);
  EXPECT_EQ(binomial(14, 7), 3432);
  EXPECT_EQ(binomial(3, 5), 0);
  EXPECT_EQ(binomial(3, -1), 0);
  for (int n = 1; n <= 20; ++n)
    for (int k = 1; k < n; ++k) EXPECT_EQ(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
}

TEST(Random, DerivedSeedsAreDeterministicAndDistinct) {
  EXPECT_EQ(derive_seed(1, 2), derive_seed(1, 2));
  EXPECT_NE(derive_seed(1, 2), derive_seed(1, 3));
  EXPECT_NE(derive_seed(1, 2), derive_seed(2, 2));
  Rng a(derive_seed(kDefaultSeed, 0)), b(derive_seed(kDefaultSeed, 0));
  for (int i = 0; i < 10; ++i) EXPECT_EQ(uniform01(a), uniform01(b));
}

TEST(Random, UnitVectorsAndUniforms) {
  Rng rng(7);
  double mean = 0;
  for (int i = 0; i < 2000; ++i) {
    const double u = uniform01(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    mean += u / 2000;
    EXPECT_NEAR(random_unit_vector(rng).norm(), 1.0, 1e-14);
  }
  EXPECT_NEAR(mean, 0.5, 0.03);
}

TEST(Parallel, EveryIndexOnceForAnyWorkerCount) {
  for (std::size_t workers : {1, 2, 3, 8}) {
    std::vector<std::atomic<int>> hits(37);
    parallel_for(hits.size(), workers, [&](std::size_t i) { ++hits[i]; });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(Parallel, RethrowsWorkerException) {
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                 if (i == 5) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}
