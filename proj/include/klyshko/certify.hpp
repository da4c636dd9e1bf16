#pragma once

// Entanglement-depth certification from a Bell-Klyshko value E.
//
// A state with k independent qubits satisfies E <= 2^{(n-k+1)/2}. Given E, the
// largest k still consistent with it bounds the number of independent qubits,
// so at least n - k qubits share entanglement.

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "klyshko/bellop.hpp"
#include "klyshko/optimize.hpp"
#include "klyshko/parallel.hpp"
#include "klyshko/qstate.hpp"
#include "klyshko/random.hpp"

namespace klyshko {

inline constexpr double kExactEpsilon = 1e-9;
inline constexpr double kEstimateSigmas = 4.0;
inline constexpr int kMinShots = 100;

/// bound(k) = 2^{(n-k+1)/2}, k = 0..n.
inline std::vector<double> thresholds(int n) {
  if (n < 2) throw std::out_of_range("thresholds: need n >= 2");
  std::vector<double> out;
  for (int k = 0; k <= n; ++k) out.push_back(std::pow(2.0, (n - k + 1) / 2.0));
  return out;
}

struct CertResult {
  int n = 0;
  double E = 0;
  double epsilon = 0;
  std::vector<double> thresholds;
  int max_consistent_independent = 0;
  int certified_entangled = 0;
  bool valid = true;  // false when E lies above every threshold
  std::vector<std::string> flags;
};

inline CertResult certify_depth(double e, int n, double epsilon = kExactEpsilon) {
  if (epsilon < 0) throw std::invalid_argument("certify_depth: epsilon must be non-negative");
  if (e < 0) throw std::invalid_argument("certify_depth: E must be non-negative");
  CertResult r;
  r.n = n;
  r.E = e;
  r.epsilon = epsilon;
  r.thresholds = thresholds(n);
  int k = -1;
  while (k + 1 <= n && e <= r.thresholds[static_cast<std::size_t>(k + 1)] + epsilon) ++k;
  if (k < 0) {
    r.valid = false;
    r.flags.emplace_back("exceeds quantum bound");
    r.max_consistent_independent = 0;
  } else {
    r.max_consistent_independent = k;
  }
  r.certified_entangled = n - r.max_consistent_independent;
  return r;
}

// ---------------------------------------------------------------------------
// Simulated experiment

struct Estimate {
  double value = 0;
  double standard_error = 0;
};

namespace detail {

inline MeasurementBasis term_bases(const Settings& st, std::size_t choice) {
  MeasurementBasis b;
  const int n = st.n();
  for (int q = 0; q < n; ++q)
    b.directions.push_back(st.qubits[static_cast<std::size_t>(q)].direction(static_cast<int>((choice >> bit_of(n, q)) & 1U)));
  return b;
}

}  // namespace detail

/// Samples every correlator in the expansion of F_n with `shots` repetitions
/// and combines the sample means. Terms use derived seeds, so the result does
/// not depend on `workers`.
template <class State>
Estimate estimate_E(const State& s, const Settings& st, int shots, std::uint64_t seed, std::size_t workers = 1) {
  if (shots < kMinShots) throw std::invalid_argument("estimate_E: need at least 100 shots per term");
  if (st.n() != s.n()) throw std::invalid_argument("estimate_E: settings and state disagree on n");
  st.validate();
  const auto poly = expand_correlators(s.n());
  const auto terms = poly.nonzero_terms();
  std::vector<double> means(terms.size()), errors(terms.size());
  parallel_for(terms.size(), workers, [&](std::size_t t) {
    const auto p = outcome_distribution(s, detail::term_bases(st, terms[t]));
    const DiscreteSampler sampler(p);
    Rng rng(derive_seed(seed, t));
    long long sum = 0;
    for (int i = 0; i < shots; ++i) sum += std::popcount(sampler(rng)) % 2 == 0 ? 1 : -1;
    const double mean = static_cast<double>(sum) / shots;
    const double variance = std::max(0.0, 1.0 - mean * mean) * shots / (shots - 1.0);
    means[t] = mean;
    errors[t] = std::sqrt(variance / shots);
  });
  Estimate e;
  double var = 0;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const double c = to_double(poly.coeff[terms[t]]);
    e.value += c * means[t];
    var += c * c * errors[t] * errors[t];
  }
  e.standard_error = std::sqrt(var);
  return e;
}

/// Certification from an estimate with the default margin of 4 standard errors.
inline CertResult certify_estimate(const Estimate& e, int n) {
  return certify_depth(std::max(0.0, e.value), n, kEstimateSigmas * e.standard_error);
}

// ---------------------------------------------------------------------------
// Worked three-qubit example: rho = 1/2 (P_S (x) P_+ + P_+ (x) P_S)

struct Rho3Report {
  DensityMatrix rho = DensityMatrix::maximally_mixed(3);
  Settings printed_settings;
  double E_at_printed_angles = 0;
  double printed_value = 2.0 * (1.0 + std::numbers::sqrt2);
  OptResult<Settings> maximum;
  CertResult certificate;
  std::string note;
};

inline DensityMatrix rho3() {
  Vector singlet = Vector::Zero(4);
  singlet(1) = 1.0 / std::numbers::sqrt2;
  singlet(2) = -1.0 / std::numbers::sqrt2;
  const auto ps = DensityMatrix::from_pure(PureState::from_amplitudes(2, singlet));
  const auto up = DensityMatrix::from_pure(PureState::basis(1, 0));
  const Matrix m = 0.5 * (tensor(ps, up).matrix() + tensor(up, ps).matrix());
  return DensityMatrix::from_matrix(3, m);
}

/// alpha = -alpha' = gamma = -gamma' = pi/8, beta = pi, beta' = pi/2, all in the
/// xz-plane and measured from z.
inline Settings rho3_printed_settings() {
  constexpr double pi = std::numbers::pi;
  return Settings::xz_plane({{pi / 8, -pi / 8}, {pi, pi / 2}, {pi / 8, -pi / 8}});
}

inline Rho3Report example_rho3(const OptimizerConfig& cfg) {
  Rho3Report r;
  r.rho = rho3();
  r.printed_settings = rho3_printed_settings();
  r.E_at_printed_angles = bell_expectation(r.rho, r.printed_settings);
  r.maximum = max_violation_settings(r.rho, cfg);
  r.certificate = certify_depth(r.maximum.best_value, 3);
  r.note =
      "The printed value 2(1+sqrt 2) exceeds the three-qubit quantum maximum 4 and cannot be reproduced. "
      "The stated angles give the value in E_at_printed_angles, and the optimized maximum is 1+sqrt 2, "
      "which lies between 2 and 2^{3/2} and so certifies two entangled qubits.";
  return r;
}

}  // namespace klyshko
