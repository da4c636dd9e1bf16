#include <gtest/gtest.h>

#include <cmath>

#include "klyshko/criteria.hpp"
#include "oracles.hpp"

using namespace klyshko;

namespace {

PureState ghz_state(int n, int sign = +1) { return embed(ghz(n, sign)); }

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Fragility, Examples) {
  EXPECT_NEAR(fragility(PureState::basis(3, 0)).fragility, 6.0, 1e-12);
  EXPECT_FALSE(fragility(PureState::basis(3, 0)).is_maximal);

  const auto w = fragility(embed(dicke(1, 3)));
  for (const auto& b : w.bloch) {
    EXPECT_NEAR(b.z(), 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(b.x(), 0.0, 1e-12);
  }
  EXPECT_NEAR(w.fragility, 26.0 / 3.0, 1e-12);

  for (int n = 2; n <= 8; ++n) {
    const auto g = fragility(ghz_state(n));
    EXPECT_NEAR(g.fragility, 3.0 * n, 1e-12);
    EXPECT_TRUE(g.is_maximal);
  }
}

TEST(Fragility, BoundedByTwoN) {
  Rng rng(derive_seed(kDefaultSeed, 21));
  for (int n = 1; n <= 5; ++n)
    for (int t = 0; t < 20; ++t) {
      const double f = fragility(oracle::random_state(n, rng)).fragility;
      EXPECT_GE(f, 2.0 * n - 1e-12);
      EXPECT_LE(f, 3.0 * n + 1e-12);
    }
}

TEST(Depolarize, ZeroTimeIsIdentity) {
  Rng rng(derive_seed(kDefaultSeed, 22));
  const auto rho = oracle::random_density(3, rng);
  EXPECT_LT(max_abs(depolarize(rho, 0).matrix() - rho.matrix()), 1e-15);
  EXPECT_THROW(depolarize(rho, -0.1), std::invalid_argument);
}

TEST(Depolarize, SingleQubitBlochDecay) {
  const Vec3 r(0.3, -0.4, 0.5);
  const auto rho = DensityMatrix::from_pure(PureState::from_bloch(r.normalized()));
  for (double t : {0.01, 0.1, 0.7}) {
    const auto out = depolarize(rho, t);
    const Vec3 b = bloch_vector(out, 0);
    EXPECT_LT((b - std::exp(-4 * t) * r.normalized()).norm(), 1e-12);
  }
}

TEST(Depolarize, MatchesPauliStringDecay) {
  Rng rng(derive_seed(kDefaultSeed, 23));
  for (int n = 1; n <= 4; ++n)
    for (double t : {0.02, 0.3}) {
      const auto rho = oracle::random_density(n, rng);
      EXPECT_LT(max_abs(depolarize(rho, t).matrix() - oracle::depolarize_pauli(rho.matrix(), n, t)), 1e-12) << n;
    }
}

TEST(Depolarize, MatchesRk4) {
  Rng rng(derive_seed(kDefaultSeed, 24));
  for (int n = 1; n <= 4; ++n) {
    const auto rho = oracle::random_density(n, rng);
    EXPECT_LT(max_abs(depolarize(rho, 0.2).matrix() - integrate_master_equation(rho, 0.2, 400).matrix()), 1e-6) << n;
  }
}

TEST(Depolarize, RhsIsTheGenerator) {
  Rng rng(derive_seed(kDefaultSeed, 25));
  const auto rho = oracle::random_density(3, rng);
  const double h = 1e-6;
  const Matrix numeric = (depolarize(rho, h).matrix() - depolarize(rho, 0).matrix()) / h;
  EXPECT_LT(max_abs(numeric - master_equation_rhs(rho.matrix(), 3)), 1e-4);
  Matrix explicit_rhs = -9.0 * rho.matrix();
  for (int q = 0; q < 3; ++q)
    for (int p = 1; p <= 3; ++p) {
      const Matrix s = oracle::embed_single(oracle::pauli(p), q, 3);
      explicit_rhs += s * rho.matrix() * s;
    }
  EXPECT_LT(max_abs(explicit_rhs - master_equation_rhs(rho.matrix(), 3)), 1e-12);
}

TEST(Depolarize, SemigroupAndCptp) {
  Rng rng(derive_seed(kDefaultSeed, 26));
  const auto rho = oracle::random_density(3, rng);
  const auto two_step = depolarize(depolarize(rho, 0.1), 0.25);
  EXPECT_LT(max_abs(two_step.matrix() - depolarize(rho, 0.35).matrix()), 1e-14);
  const auto out = depolarize(rho, 0.4);
  EXPECT_NEAR(out.trace(), 1.0, 1e-12);
  EXPECT_LT(max_abs(out.matrix() - out.matrix().adjoint()), 1e-14);
  EXPECT_GE(spectrum(out).min(), -1e-12);
  EXPECT_LE(out.purity(), rho.purity() + 1e-12);
  // long times approach the maximally mixed state
  EXPECT_LT(max_abs(depolarize(rho, 10).matrix() - DensityMatrix::maximally_mixed(3).matrix()), 1e-12);
}

TEST(DecaySlope, MatchesBlochSum) {
  for (int n = 2; n <= 5; ++n) {
    const auto g = fidelity_decay_slope(ghz_state(n));
    EXPECT_NEAR(g.analytic, -3.0 * n, 1e-12);
    EXPECT_NEAR(g.numeric, g.analytic, 1e-6);
  }
  const auto p = fidelity_decay_slope(PureState::basis(3, 5));
  EXPECT_NEAR(p.analytic, -6.0, 1e-12);
  EXPECT_NEAR(p.numeric, -6.0, 1e-6);
}

TEST(Distribute, Examples) {
  const auto r = distribute_check(4, 2, 50, derive_seed(kDefaultSeed, 27));
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.x_passes, 50);
  EXPECT_EQ(r.z_passes, 50);
  EXPECT_NEAR(r.min_fidelity, 1.0, 1e-10);
  EXPECT_LT(r.max_z_entanglement, 1e-10);
  EXPECT_THROW(distribute_check(3, 3, 1, 1), std::out_of_range);
  EXPECT_THROW(distribute_check(3, 0, 1, 1), std::out_of_range);
}

TEST(Distribute, SameAcrossWorkerCounts) {
  const auto a = distribute_check(5, 2, 30, 99, 1);
  const auto b = distribute_check(5, 2, 30, 99, 3);
  EXPECT_EQ(a.min_fidelity, b.min_fidelity);
  EXPECT_EQ(a.x_passes, b.x_passes);
}

TEST(Distribute, ParityRuleByHand) {
  // GHZ_3: x outcomes on the first qubit leave (|00> +- |11>)/sqrt2.
  const auto src = ghz_state(3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::vector<int> first{0};
    const auto m = measure_sample(src, MeasurementBasis::x_basis(3), first, seed);
    const auto expected = ghz_state(2, m.outcomes[0] > 0 ? +1 : -1);
    EXPECT_NEAR(fidelity(*m.post, expected), 1.0, 1e-12);
  }
}

TEST(MutualInformation, Examples) {
  for (int n = 2; n <= 8; ++n) EXPECT_NEAR(mutual_information(ghz_state(n), MeasurementBasis::computational(n)), n - 1.0, 1e-12);
  EXPECT_NEAR(mutual_information(PureState::basis(3, 2), MeasurementBasis::computational(3)), 0.0, 1e-12);
  EXPECT_NEAR(mutual_information(DensityMatrix::maximally_mixed(3), MeasurementBasis::computational(3)), 0.0, 1e-12);
  // (|01> + |10>)/sqrt2 in z gives perfect anticorrelation: 1 bit.
  EXPECT_NEAR(mutual_information(embed(dicke(1, 2)), MeasurementBasis::computational(2)), 1.0, 1e-12);
}

TEST(MutualInformation, EntropyBits) {
  const std::vector<double> fair{0.5, 0.5}, sure{1.0, 0.0}, four{0.25, 0.25, 0.25, 0.25};
  EXPECT_NEAR(entropy_bits(fair), 1.0, 1e-15);
  EXPECT_NEAR(entropy_bits(sure), 0.0, 1e-15);
  EXPECT_NEAR(entropy_bits(four), 2.0, 1e-15);
}

TEST(MutualInformation, NonNegative) {
  Rng rng(derive_seed(kDefaultSeed, 28));
  for (int t = 0; t < 20; ++t) {
    const auto s = oracle::random_state(3, rng);
    const MeasurementBasis b{{random_unit_vector(rng), random_unit_vector(rng), random_unit_vector(rng)}};
    EXPECT_GE(mutual_information(s, b), -1e-12);
  }
}

TEST(MaximallyMixedPartial, ListedStates) {
  const auto all = sme_examples();
  EXPECT_EQ(all.size(), 12U);
  for (const auto& e : all) {
    const auto r = mm_partial_residual(e.state);
    EXPECT_LT(r.residual, 1e-20) << e.label;
    EXPECT_EQ(r.m, e.state.n / 2);
  }
  EXPECT_THROW(sme_example("7,1"), std::invalid_argument);
  EXPECT_EQ(sme_example("4,2").n, 4);
}

TEST(MaximallyMixedPartial, ResidualEqualsPurityGap) {
  Rng rng(derive_seed(kDefaultSeed, 29));
  for (int n = 2; n <= 7; ++n)
    for (int t = 0; t < 5; ++t) {
      std::vector<Complex> c;
      for (int j = 0; j <= n; ++j) c.emplace_back(standard_normal(rng), standard_normal(rng));
      const NumericSymState s{n, c};
      for (int m = 1; m <= n / 2; ++m) {
        const auto r = mm_partial_residual(s, m);
        std::vector<int> keep(static_cast<std::size_t>(m));
        std::iota(keep.begin(), keep.end(), 0);
        const auto psi = embed(s);
        Matrix full = psi.amplitudes() * psi.amplitudes().adjoint();
        const Matrix red = oracle::partial_trace(full, n, keep);
        const double purity = (red * red).trace().real();
        EXPECT_NEAR(r.residual, purity - 1.0 / (m + 1), 1e-10) << n << " " << m;
      }
    }
}

TEST(MaximallyMixedPartial, SmallerBlocksAlsoMixed) {
  // A state whose floor(n/2) reduction is maximally mixed on its support also
  // has maximally mixed smaller reductions.
  for (const auto& e : sme_examples())
    for (int m = 1; m < e.state.n / 2; ++m) EXPECT_LT(mm_partial_residual(e.state, m).residual, 1e-20) << e.label << " " << m;
}

TEST(MaximallyMixedPartial, GhzAndRejects) {
  EXPECT_LT(mm_partial_residual(ghz(2)).residual, 1e-20);
  EXPECT_GT(mm_partial_residual(ghz(4)).residual, 0.1);
  EXPECT_THROW(mm_partial_residual(ghz(1)), std::invalid_argument);
  EXPECT_THROW(mm_partial_residual(ghz(4), 3), std::out_of_range);
  EXPECT_THROW(mm_partial_residual(SymState(3, std::vector<ComplexRational>(4))), std::invalid_argument);
}
