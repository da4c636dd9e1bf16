#include <gtest/gtest.h>

#include <cmath>

#include "klyshko/certify.hpp"
#include "klyshko/criteria.hpp"
#include "oracles.hpp"

using namespace klyshko;

TEST(Thresholds, Examples) {
  const auto t3 = thresholds(3);
  ASSERT_EQ(t3.size(), 4U);
  EXPECT_DOUBLE_EQ(t3[0], 4.0);
  EXPECT_NEAR(t3[1], 2 * std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(t3[2], 2.0);
  EXPECT_NEAR(t3[3], std::sqrt(2.0), 1e-15);
  EXPECT_THROW(thresholds(1), std::out_of_range);
  for (int n = 2; n <= 10; ++n) {
    const auto t = thresholds(n);
    EXPECT_NEAR(t.front(), quantum_max(n), 1e-12);
    EXPECT_DOUBLE_EQ(t[static_cast<std::size_t>(n - 1)], 2.0);
    for (std::size_t k = 1; k < t.size(); ++k) EXPECT_LT(t[k], t[k - 1]);
  }
}

TEST(Certify, Examples) {
  EXPECT_EQ(certify_depth(2.5, 3).certified_entangled, 2);
  EXPECT_EQ(certify_depth(2.5, 3).max_consistent_independent, 1);
  EXPECT_EQ(certify_depth(2.0, 3).certified_entangled, 1);
  EXPECT_EQ(certify_depth(1.0, 3).certified_entangled, 0);
  EXPECT_EQ(certify_depth(4.0, 3).certified_entangled, 3);
  EXPECT_EQ(certify_depth(3.9, 4).certified_entangled, 3);
  EXPECT_EQ(certify_depth(4.1, 4).certified_entangled, 4);
  EXPECT_TRUE(certify_depth(4.0, 3).valid);
  EXPECT_TRUE(certify_depth(4.0, 3).flags.empty());
}

TEST(Certify, AboveQuantumBoundIsFlagged) {
  const auto r = certify_depth(4.5, 3);
  EXPECT_FALSE(r.valid);
  EXPECT_EQ(r.certified_entangled, 3);
  ASSERT_EQ(r.flags.size(), 1U);
  EXPECT_EQ(r.flags[0], "exceeds quantum bound");
  EXPECT_TRUE(certify_depth(4.5, 3, 0.6).valid);
}

TEST(Certify, EpsilonWidensConsistency) {
  EXPECT_EQ(certify_depth(2.9, 3, 0).certified_entangled, 3);
  EXPECT_EQ(certify_depth(2.9, 3, 0.1).certified_entangled, 2);
  EXPECT_THROW(certify_depth(2.0, 3, -1e-3), std::invalid_argument);
  EXPECT_THROW(certify_depth(-1.0, 3), std::invalid_argument);
}

TEST(Certify, MonotoneInE) {
  for (int n = 2; n <= 8; ++n) {
    int last = 0;
    for (double e = 0; e <= quantum_max(n) + 1; e += 0.01) {
      const int c = certify_depth(e, n).certified_entangled;
      EXPECT_GE(c, last);
      last = c;
    }
    EXPECT_EQ(last, n);
  }
}

TEST(Estimate, RejectsBadInput) {
  const auto s = embed(ghz(3));
  const auto st = ghz_optimal_settings(3);
  EXPECT_THROW(estimate_E(s, st, 99, 1), std::invalid_argument);
  EXPECT_THROW(estimate_E(s, ghz_optimal_settings(4), 100, 1), std::invalid_argument);
}

TEST(Estimate, GhzExactCorrelators) {
  // For odd n every correlator at these settings is +-1, so sampling is exact.
  for (int n : {3, 5}) {
    const auto e = estimate_E(embed(ghz(n)), ghz_optimal_settings(n), 200, derive_seed(kDefaultSeed, 31));
    EXPECT_NEAR(e.value, quantum_max(n), 1e-9) << n;
    EXPECT_NEAR(e.standard_error, 0.0, 1e-12);
    EXPECT_EQ(certify_estimate(e, n).certified_entangled, n);
  }
}

TEST(Estimate, WithinFourSigmaOfExact) {
  const auto rho = depolarize(DensityMatrix::from_pure(embed(ghz(3))), 0.05);
  const auto st = ghz_optimal_settings(3);
  const double exact = bell_expectation(rho, st);
  int inside = 0;
  for (std::uint64_t t = 0; t < 40; ++t) {
    const auto e = estimate_E(rho, st, 400, derive_seed(kDefaultSeed, 100 + t));
    EXPECT_GT(e.standard_error, 0.0);
    if (std::abs(e.value - exact) <= 4 * e.standard_error) ++inside;
  }
  EXPECT_GE(inside, 38);
}

TEST(Estimate, IndependentOfWorkers) {
  const auto rho = depolarize(DensityMatrix::from_pure(embed(ghz(3))), 0.1);
  const auto st = ghz_optimal_settings(3);
  const auto a = estimate_E(rho, st, 300, 7, 1);
  const auto b = estimate_E(rho, st, 300, 7, 4);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.standard_error, b.standard_error);
}

TEST(Estimate, ProductStatesNeverCertify) {
  Rng rng(derive_seed(kDefaultSeed, 32));
  for (int t = 0; t < 10; ++t) {
    PureState s = PureState::from_bloch(random_unit_vector(rng));
    for (int q = 1; q < 3; ++q) s = tensor(s, PureState::from_bloch(random_unit_vector(rng)));
    const auto st = Settings::random(3, rng);
    EXPECT_LE(bell_expectation(s, st), 2.0 + 1e-12);
    const auto e = estimate_E(s, st, 500, derive_seed(kDefaultSeed, 200 + static_cast<std::uint64_t>(t)));
    EXPECT_LE(certify_estimate(e, 3).certified_entangled, 1);
  }
}

TEST(Estimate, GhzTimesProductCertifiesBlock) {
  // GHZ on n-m qubits with m product qubits along +x: the best settings give
  // exactly 2^{(n-m+1)/2}, so the certificate is n-m.
  for (auto [n, m] : {std::pair{3, 1}, std::pair{4, 1}, std::pair{4, 2}, std::pair{5, 2}}) {
    PureState s = embed(ghz(n - m));
    for (int q = 0; q < m; ++q) s = tensor(s, PureState::from_bloch(Vec3::UnitX()));
    OptimizerConfig cfg;
    cfg.restarts = 10;
    const auto r = max_violation_settings(s, cfg);
    EXPECT_NEAR(r.best_value, std::pow(2.0, (n - m + 1) / 2.0), 1e-6) << n << " " << m;
    EXPECT_EQ(certify_depth(r.best_value, n, 1e-6).certified_entangled, n - m) << n << " " << m;
  }
}

TEST(Rho3, StateAndPrintedAngles) {
  const auto rho = rho3();
  EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
  EXPECT_GE(spectrum(rho).min(), -1e-12);
  EXPECT_NEAR(bell_expectation(rho, rho3_printed_settings()), 1.0, 1e-12);
}

TEST(Rho3, MaximumCertifiesTwo) {
  OptimizerConfig cfg;
  cfg.restarts = 10;
  const auto r = example_rho3(cfg);
  EXPECT_NEAR(r.maximum.best_value, 1 + std::sqrt(2.0), 1e-6);
  EXPECT_EQ(r.certificate.certified_entangled, 2);
  EXPECT_NEAR(r.printed_value, 2 * (1 + std::sqrt(2.0)), 1e-15);
  EXPECT_GT(r.printed_value, quantum_max(3));
  EXPECT_FALSE(r.note.empty());
}
