#pragma once

// Maximal-entanglement criteria for symmetric states: fragility under
// independent single-qubit white noise, distribution of GHZ entanglement by
// x-basis measurements, mutual information of computational-basis outcomes,
// and the maximally-mixed partial-state test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "klyshko/parallel.hpp"
#include "klyshko/qstate.hpp"
#include "klyshko/random.hpp"
#include "klyshko/symstate.hpp"

namespace klyshko {

// ---------------------------------------------------------------------------
// Fragility

struct FragilityReport {
  std::vector<Vec3> bloch;  // <sigma> per qubit
  double fragility = 0;     // |sum_j |<sigma_j>|^2 - 3n|
  bool is_maximal = false;  // sum_j |<sigma_j>|^2 <= tolerance
};

inline FragilityReport fragility(const PureState& s, double tolerance = 1e-10) {
  FragilityReport r;
  double total = 0;
  for (int q = 0; q < s.n(); ++q) {
    r.bloch.push_back(bloch_vector(s, q));
    total += r.bloch.back().squaredNorm();
  }
  r.fragility = std::abs(total - 3.0 * s.n());
  r.is_maximal = total <= tolerance;
  return r;
}

// ---------------------------------------------------------------------------
// Noise: rho' = sum_j (sigma_j rho sigma_j - 3 rho)

/// Right-hand side of the master equation.
inline Matrix master_equation_rhs(const Matrix& rho, int n) {
  Matrix out = -3.0 * n * rho;
  for (int q = 0; q < n; ++q)
    for (const Matrix2& p : {pauli_x(), pauli_y(), pauli_z()}) {
      Matrix term = rho;
      conjugate_single(term, n, q, p);
      out += term;
    }
  return out;
}

/// Exact solution at time t. The generator is a sum of commuting single-qubit
/// terms under which a Bloch component decays as e^{-4t}, so each qubit
/// undergoes rho -> e^{-4t} rho + (1 - e^{-4t}) (I/2 (x) Tr_q rho).
inline DensityMatrix depolarize(const DensityMatrix& rho, double t) {
  if (t < 0) throw std::invalid_argument("depolarize: negative time");
  const int n = rho.n();
  const double keep = std::exp(-4.0 * t);
  Matrix m = rho.matrix();
  for (int q = 0; q < n; ++q) {
    const std::size_t stride = std::size_t{1} << bit_of(n, q);
    const std::size_t d = rho.dim();
    for (std::size_t i = 0; i < d; ++i) {
      if (i & stride) continue;
      for (std::size_t j = 0; j < d; ++j) {
        if (j & stride) continue;
        const auto i0 = static_cast<Eigen::Index>(i), i1 = static_cast<Eigen::Index>(i | stride);
        const auto j0 = static_cast<Eigen::Index>(j), j1 = static_cast<Eigen::Index>(j | stride);
        const Complex avg = 0.5 * (m(i0, j0) + m(i1, j1));
        m(i0, j0) = keep * m(i0, j0) + (1 - keep) * avg;
        m(i1, j1) = keep * m(i1, j1) + (1 - keep) * avg;
        m(i0, j1) *= keep;
        m(i1, j0) *= keep;
      }
    }
  }
  return make_density_unchecked(n, std::move(m));
}

/// Classical RK4 integration of the master equation; cross-check for depolarize().
inline DensityMatrix integrate_master_equation(const DensityMatrix& rho, double t, int steps) {
  if (t < 0 || steps < 1) throw std::invalid_argument("integrate_master_equation: bad time or step count");
  const int n = rho.n();
  const double h = t / steps;
  Matrix m = rho.matrix();
  for (int s = 0; s < steps; ++s) {
    const Matrix k1 = master_equation_rhs(m, n);
    const Matrix k2 = master_equation_rhs(m + 0.5 * h * k1, n);
    const Matrix k3 = master_equation_rhs(m + 0.5 * h * k2, n);
    const Matrix k4 = master_equation_rhs(m + h * k3, n);
    m += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return make_density_unchecked(n, std::move(m));
}

struct DecaySlope {
  double numeric;   // d/dt <psi|rho_t|psi> at t = 0 from depolarize()
  double analytic;  // sum_j |<sigma_j>|^2 - 3n
};

/// Initial slope of the fidelity under noise. The numeric value uses the
/// fourth-order one-sided difference on depolarize() with step h.
inline DecaySlope fidelity_decay_slope(const PureState& psi, double h = 1e-4) {
  const auto rho = DensityMatrix::from_pure(psi);
  auto f = [&](double t) { return fidelity(psi, depolarize(rho, t)); };
  const double numeric =
      (-25.0 * f(0) + 48.0 * f(h) - 36.0 * f(2 * h) + 16.0 * f(3 * h) - 3.0 * f(4 * h)) / (12.0 * h);
  double total = 0;
  for (int q = 0; q < psi.n(); ++q) total += bloch_vector(psi, q).squaredNorm();
  return {numeric, total - 3.0 * psi.n()};
}

// ---------------------------------------------------------------------------
// Distribution of GHZ entanglement

struct DistributeReport {
  int n = 0;
  int k = 0;
  int trials = 0;
  int x_passes = 0;              // trials whose post-state matched the parity-predicted GHZ
  double min_fidelity = 1.0;     // worst fidelity with the predicted GHZ
  int z_passes = 0;              // single-qubit z measurements that left a product state
  double max_z_entanglement = 0; // worst (1 - purity) of a single-qubit reduction after z measurement
  bool pass = false;
};

inline constexpr double kDistributeTolerance = 1e-10;

/// Measures k randomly chosen qubits of GHZ_n(+) in the x basis; an even number
/// of -1 outcomes must leave GHZ_{n-k}(+) on the rest, odd leaves GHZ_{n-k}(-).
/// Every trial also measures one random qubit in z and checks that the rest is
/// a product state.
inline DistributeReport distribute_check(int n, int k, int trials, std::uint64_t seed, std::size_t workers = 1) {
  if (k < 1 || k >= n || n > 10) throw std::out_of_range("distribute_check: need 1 <= k < n <= 10");
  const PureState source = embed(ghz(n, +1));
  const PureState target_plus = embed(ghz(n - k, +1));
  const PureState target_minus = embed(ghz(n - k, -1));

  struct Trial {
    double fidelity;
    double z_entanglement;
  };
  std::vector<Trial> results(static_cast<std::size_t>(trials));
  parallel_for(results.size(), workers, [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    std::vector<int> qubits(static_cast<std::size_t>(n));
    std::iota(qubits.begin(), qubits.end(), 0);
    std::shuffle(qubits.begin(), qubits.end(), rng);
    const std::vector<int> subset(qubits.begin(), qubits.begin() + k);

    const auto x = measure_sample(source, MeasurementBasis::x_basis(n), subset, rng());
    const int minus_count = static_cast<int>(std::count(x.outcomes.begin(), x.outcomes.end(), -1));
    const PureState& expected = minus_count % 2 == 0 ? target_plus : target_minus;

    const int z_qubit = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    const std::vector<int> single{z_qubit};
    const auto z = measure_sample(source, MeasurementBasis::computational(n), single, rng());
    double z_entanglement = 0;
    if (z.post && z.post->n() > 1)
      for (int q = 0; q < z.post->n(); ++q) {
        const std::vector<int> keep{q};
        z_entanglement = std::max(z_entanglement, 1.0 - partial_trace(*z.post, keep).purity());
      }
    results[t] = {fidelity(*x.post, expected), z_entanglement};
  });

  DistributeReport r{n, k, trials};
  for (const auto& t : results) {
    r.min_fidelity = std::min(r.min_fidelity, t.fidelity);
    r.max_z_entanglement = std::max(r.max_z_entanglement, t.z_entanglement);
    if (std::abs(t.fidelity - 1.0) <= kDistributeTolerance) ++r.x_passes;
    if (t.z_entanglement <= kDistributeTolerance) ++r.z_passes;
  }
  r.pass = r.x_passes == trials && r.z_passes == trials;
  return r;
}

// ---------------------------------------------------------------------------
// Mutual information

inline double entropy_bits(std::span<const double> p) {
  double h = 0;
  for (double x : p)
    if (x > 0) h -= x * std::log2(x);
  return h;
}

/// I = sum_j H(a_j) - H(a_1..a_n) for simultaneous measurement of every qubit.
template <class State>
double mutual_information(const State& s, const MeasurementBasis& bases) {
  const auto joint = outcome_distribution(s, bases);
  const int n = s.n();
  double marginals = 0;
  for (int q = 0; q < n; ++q) {
    double p_minus = 0;
    for (std::size_t i = 0; i < joint.size(); ++i)
      if (outcome_sign(i, n, q) < 0) p_minus += joint[i];
    const double pair[2] = {1.0 - p_minus, p_minus};
    marginals += entropy_bits(pair);
  }
  return marginals - entropy_bits(joint);
}

// ---------------------------------------------------------------------------
// Maximally mixed partial states

struct MMResidual {
  int m = 0;                     // size of the reduced block (floor(n/2) by default)
  std::vector<double> observed;  // spectrum of the m-qubit reduction, descending
  std::vector<double> target;    // m+1 entries 1/(m+1), then zeros
  double residual = 0;           // sum_i (observed_i - target_i)^2
};

/// Compares the spectrum of the first-m-qubit reduction to m+1 equal nonzero
/// eigenvalues. For symmetric states any m-subset gives the same reduction.
template <class Scalar>
MMResidual mm_partial_residual(const BasicSymState<Scalar>& s, int m) {
  if (s.n < 2) throw std::invalid_argument("mm_partial_residual: need n >= 2");
  if (m < 1 || m > s.n / 2) throw std::out_of_range("mm_partial_residual: need 1 <= m <= n/2");
  const PureState psi = embed(s);
  std::vector<int> keep(static_cast<std::size_t>(m));
  std::iota(keep.begin(), keep.end(), 0);
  MMResidual r;
  r.m = m;
  r.observed = spectrum(partial_trace(psi, keep)).values;
  r.target.assign(r.observed.size(), 0.0);
  std::fill_n(r.target.begin(), m + 1, 1.0 / (m + 1));
  for (std::size_t i = 0; i < r.observed.size(); ++i) r.residual += std::pow(r.observed[i] - r.target[i], 2);
  return r;
}

template <class Scalar>
MMResidual mm_partial_residual(const BasicSymState<Scalar>& s) {
  return mm_partial_residual(s, s.n / 2);
}

// ---------------------------------------------------------------------------
// Known states meeting the partial-state test, coefficients over |j,n>

struct NamedSymState {
  std::string label;  // "n,index", e.g. "6,-3"
  NumericSymState state;
};

inline std::vector<NamedSymState> sme_examples() {
  const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
  const Complex i(0, 1);
  std::vector<NamedSymState> out;
  for (int s : {+1, -1}) {
    const std::string pm = s > 0 ? "+" : "-";
    const double d = s;
    out.push_back({"3," + pm + "1", {3, {1, 0, 0, d}}});
    out.push_back({"3," + pm + "2", {3, {1, d, -1, -d}}});
    out.push_back({"4," + pm + "1", {4, {-3, d * r3, 1, d * r3, -3}}});
    out.push_back({"6," + pm + "1", {6, {0, 1, 0, 0, 0, d, 0}}});
    out.push_back({"6," + pm + "3", {6, {r2, 0, 0, d * i / 2.0, 0, 0, r2}}});
  }
  out.push_back({"4,2", {4, {1, 0, i / r3, 0, 1}}});
  out.push_back({"6,2", {6, {-3, 0, 1, 0, 1, 0, -3}}});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.label < b.label; });
  return out;
}

inline NumericSymState sme_example(const std::string& label) {
  for (auto& e : sme_examples())
    if (e.label == label) return e.state;
  throw std::invalid_argument("unknown example state '" + label + "'");
}

}  // namespace klyshko
