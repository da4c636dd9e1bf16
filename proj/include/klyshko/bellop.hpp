#pragma once

// Klyshko polynomial F_n (classical, exact) and the matching Bell operator B_n.
//
// Classical recursion, with F' denoting F with every a_j <-> a_j' swapped:
//   F_1 = 2 a_1
//   F_n = (a_n + a_n')/2 F_{n-1} + (a_n - a_n')/2 F_{n-1}'
// Quantum recursion, same shape with a_j -> a_j.sigma:
//   B_1 = 2 a_1.sigma, B_1' = 2 a_1'.sigma
//   B_n  = B_{n-1} (x) (A + A')/2 + B_{n-1}' (x) (A - A')/2
//   B_n' = B_{n-1}' (x) (A + A')/2 - B_{n-1} (x) (A - A')/2
// The base case 2 a.sigma makes B_2 = AB + AB' + A'B - A'B' (plain CHSH).

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "klyshko/parallel.hpp"
#include "klyshko/qstate.hpp"
#include "klyshko/random.hpp"
#include "klyshko/rational.hpp"

namespace klyshko {

inline constexpr int kMaxLhvQubits = 10;
inline constexpr int kMaxOperatorQubits = 12;

/// 2^{(n+1)/2}: largest eigenvalue of B_n over all settings.
inline double quantum_max(int n) { return std::pow(2.0, (n + 1) / 2.0); }

// ---------------------------------------------------------------------------
// Classical side

/// Predetermined outcomes (a_j, a_j') in {-1, +1} for each qubit.
class Assignment {
 public:
  static Assignment from_values(std::vector<std::array<int, 2>> values) {
    if (values.empty()) throw std::invalid_argument("assignment needs at least one qubit");
    for (const auto& v : values)
      if ((v[0] != 1 && v[0] != -1) || (v[1] != 1 && v[1] != -1))
        throw std::invalid_argument("assignment values must be +1 or -1");
    return Assignment(std::move(values));
  }

  /// Decodes 2n bits: bit (2(n-1-q)+1) gives a_q, bit 2(n-1-q) gives a_q'; a set bit means -1.
  static Assignment from_index(int n, std::uint64_t index) {
    std::vector<std::array<int, 2>> v(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
      const int shift = 2 * (n - 1 - q);
      v[static_cast<std::size_t>(q)] = {(index >> (shift + 1)) & 1U ? -1 : 1, (index >> shift) & 1U ? -1 : 1};
    }
    return Assignment(std::move(v));
  }

  static Assignment random(int n, Rng& rng) {
    std::vector<std::array<int, 2>> v(static_cast<std::size_t>(n));
    for (auto& pair : v) {
      const auto bits = rng();
      pair = {bits & 1U ? -1 : 1, bits & 2U ? -1 : 1};
    }
    return Assignment(std::move(v));
  }

  [[nodiscard]] int n() const { return static_cast<int>(values_.size()); }
  [[nodiscard]] int a(int q) const { return values_[static_cast<std::size_t>(q)][0]; }
  [[nodiscard]] int a_prime(int q) const { return values_[static_cast<std::size_t>(q)][1]; }
  /// choice 0 = unprimed, 1 = primed.
  [[nodiscard]] int value(int q, int choice) const { return values_[static_cast<std::size_t>(q)][static_cast<std::size_t>(choice)]; }
  [[nodiscard]] const std::vector<std::array<int, 2>>& values() const { return values_; }

  /// a_j <-> a_j' on every qubit.
  [[nodiscard]] Assignment swapped() const {
    auto v = values_;
    for (auto& pair : v) std::swap(pair[0], pair[1]);
    return Assignment(std::move(v));
  }

 private:
  explicit Assignment(std::vector<std::array<int, 2>> v) : values_(std::move(v)) {}
  std::vector<std::array<int, 2>> values_;
};

/// (F, F') evaluated on qubits [first, first + count).
struct KlyshkoPair {
  Rational f;
  Rational f_prime;
};

inline KlyshkoPair klyshko_pair(const Assignment& asg, int first, int count) {
  if (count < 1 || first < 0 || first + count > asg.n()) throw std::out_of_range("klyshko_pair: bad qubit range");
  Rational f(2 * asg.a(first));
  Rational fp(2 * asg.a_prime(first));
  const Rational half(1, 2);
  for (int q = first + 1; q < first + count; ++q) {
    const Rational plus = half * Rational(asg.a(q) + asg.a_prime(q));
    const Rational minus = half * Rational(asg.a(q) - asg.a_prime(q));
    const Rational next_f = plus * f + minus * fp;
    const Rational next_fp = plus * fp - minus * f;
    f = next_f;
    fp = next_fp;
  }
  return {f, fp};
}

inline Rational f_classical(const Assignment& asg) { return klyshko_pair(asg, 0, asg.n()).f; }

inline Rational f_prime(const Assignment& asg) { return klyshko_pair(asg, 0, asg.n()).f_prime; }

/// Exact max of F_n over all 4^n deterministic assignments.
inline Rational lhv_max(int n, std::size_t workers = 1) {
  if (n < 1 || n > kMaxLhvQubits) throw std::out_of_range("lhv_max: n must be in [1, 10]");
  const std::uint64_t total = std::uint64_t{1} << (2 * n);
  const std::size_t chunks = 64;
  std::vector<Rational> best(chunks, Rational(-1000));
  parallel_for(chunks, workers, [&](std::size_t c) {
    Rational local(-1000);
    for (std::uint64_t idx = c; idx < total; idx += chunks) local = std::max(local, f_classical(Assignment::from_index(n, idx)));
    best[c] = local;
  });
  return *std::max_element(best.begin(), best.end());
}

/// F_n = sum_c coeff[c] prod_j a_j^(c_j). Choice bit (n-1-j) set means qubit j
/// uses its primed setting.
struct CorrelatorPoly {
  int n = 0;
  std::vector<Rational> coeff;

  [[nodiscard]] Rational evaluate(const Assignment& asg) const {
    if (asg.n() != n) throw std::invalid_argument("CorrelatorPoly::evaluate: qubit count mismatch");
    Rational total = 0;
    for (std::size_t c = 0; c < coeff.size(); ++c) {
      if (coeff[c].numerator() == 0) continue;
      int product = 1;
      for (int q = 0; q < n; ++q) product *= asg.value(q, static_cast<int>((c >> bit_of(n, q)) & 1U));
      total += coeff[c] * Rational(product);
    }
    return total;
  }

  [[nodiscard]] std::vector<std::size_t> nonzero_terms() const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < coeff.size(); ++c)
      if (coeff[c].numerator() != 0) out.push_back(c);
    return out;
  }

  /// "u"/"p" per qubit, qubit 0 first.
  [[nodiscard]] std::string choice_label(std::size_t c) const {
    std::string s;
    for (int q = 0; q < n; ++q) s += (c >> bit_of(n, q)) & 1U ? 'p' : 'u';
    return s;
  }
};

/// Multilinear expansions of (F_n, F_n') by running the recursion on coefficients.
inline std::pair<CorrelatorPoly, CorrelatorPoly> expand_correlator_pair(int n) {
  if (n < 1 || n > kMaxQubits) throw std::out_of_range("expand_correlators: n must be in [1, 14]");
  std::vector<Rational> f{Rational(2), Rational(0)};
  std::vector<Rational> fp{Rational(0), Rational(2)};
  const Rational half(1, 2);
  for (int k = 2; k <= n; ++k) {
    std::vector<Rational> nf(f.size() * 2), nfp(f.size() * 2);
    for (std::size_t c = 0; c < f.size(); ++c) {
      // new qubit appended as least significant bit: 0 = a_k, 1 = a_k'
      nf[2 * c] = half * (f[c] + fp[c]);
      nf[2 * c + 1] = half * (f[c] - fp[c]);
      nfp[2 * c] = half * (fp[c] - f[c]);
      nfp[2 * c + 1] = half * (fp[c] + f[c]);
    }
    f = std::move(nf);
    fp = std::move(nfp);
  }
  return {CorrelatorPoly{n, std::move(f)}, CorrelatorPoly{n, std::move(fp)}};
}

inline CorrelatorPoly expand_correlators(int n) { return expand_correlator_pair(n).first; }

/// Max |lhs - rhs| of F_n = 1/4 (F_{n-m} + F_{n-m}') F_m + 1/4 (F_{n-m} - F_{n-m}') F_m'
/// over random assignments, where F_{n-m} acts on the first n-m qubits and F_m
/// on the last m.
inline Rational fnm_identity_check(int n, int m, int trials, std::uint64_t seed) {
  if (m < 1 || m >= n || n > kMaxOperatorQubits) throw std::out_of_range("fnm_identity_check: need 1 <= m < n <= 12");
  Rng rng(seed);
  const Rational quarter(1, 4);
  Rational worst = 0;
  for (int t = 0; t < trials; ++t) {
    const auto asg = Assignment::random(n, rng);
    const Rational lhs = f_classical(asg);
    const auto head = klyshko_pair(asg, 0, n - m);
    const auto tail = klyshko_pair(asg, n - m, m);
    const Rational rhs = quarter * (head.f + head.f_prime) * tail.f + quarter * (head.f - head.f_prime) * tail.f_prime;
    worst = std::max(worst, boost::abs(lhs - rhs));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Quantum side

struct QubitSettings {
  Vec3 a;
  Vec3 a_prime;

  /// choice 0 = a, 1 = a'.
  [[nodiscard]] const Vec3& direction(int choice) const { return choice == 0 ? a : a_prime; }
  Vec3& direction(int choice) { return choice == 0 ? a : a_prime; }
};

/// Two measurement directions per qubit.
struct Settings {
  std::vector<QubitSettings> qubits;

  [[nodiscard]] int n() const { return static_cast<int>(qubits.size()); }

  void validate() const {
    if (qubits.empty()) throw std::invalid_argument("settings need at least one qubit");
    for (const auto& q : qubits) {
      check_unit(q.a);
      check_unit(q.a_prime);
    }
  }

  static Settings random(int n, Rng& rng) {
    Settings s;
    for (int q = 0; q < n; ++q) s.qubits.push_back({random_unit_vector(rng), random_unit_vector(rng)});
    return s;
  }

  /// Directions in the xz-plane, angles measured from z.
  static Settings xz_plane(const std::vector<std::array<double, 2>>& angles) {
    Settings s;
    for (const auto& [t, tp] : angles)
      s.qubits.push_back({Vec3(std::sin(t), 0, std::cos(t)), Vec3(std::sin(tp), 0, std::cos(tp))});
    return s;
  }
};

/// (B_n, B_n') without unit-norm checks: B is linear in every direction, which
/// the optimizers use to read off coefficient vectors.
inline std::pair<Matrix, Matrix> bell_operator_pair_unchecked(const Settings& st) {
  if (st.n() < 1 || st.n() > kMaxOperatorQubits) throw std::out_of_range("bell_operator: n must be in [1, 12]");
  Matrix b = 2.0 * Matrix(pauli_dot(st.qubits[0].a));
  Matrix bp = 2.0 * Matrix(pauli_dot(st.qubits[0].a_prime));
  for (int q = 1; q < st.n(); ++q) {
    const Matrix2 sum = 0.5 * (pauli_dot(st.qubits[static_cast<std::size_t>(q)].a) + pauli_dot(st.qubits[static_cast<std::size_t>(q)].a_prime));
    const Matrix2 diff = 0.5 * (pauli_dot(st.qubits[static_cast<std::size_t>(q)].a) - pauli_dot(st.qubits[static_cast<std::size_t>(q)].a_prime));
    Matrix nb = kron(b, sum) + kron(bp, diff);
    Matrix nbp = kron(bp, sum) - kron(b, diff);
    b = std::move(nb);
    bp = std::move(nbp);
  }
  return {std::move(b), std::move(bp)};
}

inline Matrix bell_operator(const Settings& st) {
  st.validate();
  return bell_operator_pair_unchecked(st).first;
}

inline double bell_expectation(const PureState& s, const Settings& st) {
  st.validate();
  if (s.n() != st.n()) throw std::invalid_argument("bell_expectation: qubit count mismatch");
  const Matrix b = bell_operator_pair_unchecked(st).first;
  return s.amplitudes().dot(b * s.amplitudes()).real();
}

inline double bell_expectation(const DensityMatrix& rho, const Settings& st) {
  st.validate();
  if (rho.n() != st.n()) throw std::invalid_argument("bell_expectation: qubit count mismatch");
  const Matrix b = bell_operator_pair_unchecked(st).first;
  // Tr(rho B) = sum_ij rho_ij B_ji
  return (rho.matrix().transpose().cwiseProduct(b)).sum().real();
}

struct BoundCheck {
  double lambda_max_squared;  // largest eigenvalue of B_n^2
  double bound;               // 2^{n+1}
  bool pass;
};

inline constexpr double kBoundSlack = 1e-8;

/// lambda_max(B_n^2) <= 2^{n+1}.
inline BoundCheck bound_check(const Settings& st) {
  const Matrix b = bell_operator(st);
  const Spectrum spec = spectrum(b);
  const double top = std::max(spec.max() * spec.max(), spec.min() * spec.min());
  const double bound = std::pow(2.0, st.n() + 1);
  return {top, bound, top <= bound + kBoundSlack};
}

/// a_j in the xy-plane at angle (j-1)(-1)^{n+1} pi/(2n) from x (j 1-based) and
/// a_j' perpendicular to it in the same plane. The perpendicular's orientation
/// is fixed only up to sign; both are evaluated on |0..0> + |1..1> and the
/// larger expectation is kept (ties keep +pi/2).
inline Settings ghz_optimal_settings(int n) {
  if (n < 2 || n > kMaxOperatorQubits) throw std::out_of_range("ghz_optimal_settings: n must be in [2, 12]");
  constexpr double pi = 3.14159265358979323846;
  auto build = [n](double turn) {
    Settings st;
    const double sign = (n + 1) % 2 == 0 ? 1.0 : -1.0;
    for (int j = 0; j < n; ++j) {
      const double angle = j * sign * pi / (2.0 * n);
      st.qubits.push_back({Vec3(std::cos(angle), std::sin(angle), 0), Vec3(std::cos(angle + turn), std::sin(angle + turn), 0)});
    }
    return st;
  };
  Vector ghz_amp = Vector::Zero(static_cast<Eigen::Index>(dimension(n)));
  ghz_amp(0) = ghz_amp(ghz_amp.size() - 1) = 1.0 / std::sqrt(2.0);
  const auto ghz_state = PureState::from_amplitudes(n, ghz_amp, false);
  Settings plus = build(pi / 2), minus = build(-pi / 2);
  return bell_expectation(ghz_state, minus) > bell_expectation(ghz_state, plus) + 1e-12 ? minus : plus;
}

/// alpha|0..0> + beta|1..1>.
inline PureState ghz_like(int n, double alpha, double beta) {
  Vector amp = Vector::Zero(static_cast<Eigen::Index>(dimension(n)));
  amp(0) = alpha;
  amp(amp.size() - 1) = beta;
  return PureState::from_amplitudes(n, std::move(amp));
}

/// Violation of the alpha,beta GHZ-like state at the GHZ-optimal settings.
struct WeightedGhzViolation {
  double expectation;     // <B_n> by dense contraction
  double factor;          // expectation / 2 (violation ratio over the classical bound)
  double naive_factor;    // alpha beta 2^{(n-1)/2}
  double doubled_factor;  // 2 alpha beta 2^{(n-1)/2}
};

inline WeightedGhzViolation weighted_ghz_violation(int n, double alpha, double beta) {
  const double e = bell_expectation(ghz_like(n, alpha, beta), ghz_optimal_settings(n));
  const double base = alpha * beta * std::pow(2.0, (n - 1) / 2.0);
  return {e, e / 2.0, base, 2.0 * base};
}

}  // namespace klyshko
