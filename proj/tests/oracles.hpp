#pragma once

// Independent reference computations used only by the tests. They favor
// directness over speed and share no code paths with the library beyond the
// basic state containers.

#include <bit>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "klyshko/bellop.hpp"
#include "klyshko/qstate.hpp"
#include "klyshko/random.hpp"

namespace oracle {

using klyshko::Complex;
using klyshko::Matrix;
using klyshko::Rational;
using klyshko::Vec3;

inline Matrix pauli(int which) {
  Matrix p = Matrix::Zero(2, 2);
  switch (which) {
    case 0: p(0, 0) = p(1, 1) = 1; break;
    case 1: p(0, 1) = p(1, 0) = 1; break;
    case 2: p(0, 1) = Complex(0, -1); p(1, 0) = Complex(0, 1); break;
    default: p(0, 0) = 1; p(1, 1) = -1; break;
  }
  return p;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Matrix sigma_dot(const Vec3& d) { return d.x() * pauli(1) + d.y() * pauli(2) + d.z() * pauli(3); }

/// Kronecker product of single-qubit operators, qubit 0 leftmost.
inline Matrix product(const std::vector<Matrix>& ops) {
  Matrix out = ops.front();
  for (std::size_t i = 1; i < ops.size(); ++i) out = kron(out, ops[i]);
  return out;
}

/// Operator placing `op` on `qubit` of n.
inline Matrix embed_single(const Matrix& op, int qubit, int n) {
  std::vector<Matrix> ops(static_cast<std::size_t>(n), pauli(0));
  ops[static_cast<std::size_t>(qubit)] = op;
  return product(ops);
}

/// B_n built as sum_c coeff_c (x)_j sigma . d_{j, c_j}, independent of the
/// operator recursion.
inline Matrix bell_from_correlators(const klyshko::Settings& st) {
  const int n = st.n();
  const auto poly = klyshko::expand_correlators(n);
  const auto d = static_cast<Eigen::Index>(klyshko::dimension(n));
  Matrix out = Matrix::Zero(d, d);
  for (std::size_t c = 0; c < poly.coeff.size(); ++c) {
    if (poly.coeff[c].numerator() == 0) continue;
    std::vector<Matrix> ops;
    for (int q = 0; q < n; ++q) {
      const int choice = static_cast<int>((c >> (n - 1 - q)) & 1U);
      ops.push_back(sigma_dot(st.qubits[static_cast<std::size_t>(q)].direction(choice)));
    }
    out += klyshko::to_double(poly.coeff[c]) * product(ops);
  }
  return out;
}

/// Reduced density matrix by direct summation over full index pairs.
inline Matrix partial_trace(const Matrix& rho, int n, const std::vector<int>& keep) {
  const int k = static_cast<int>(keep.size());
  const auto dk = static_cast<Eigen::Index>(1) << k;
  Matrix out = Matrix::Zero(dk, dk);
  const auto d = static_cast<std::size_t>(1) << n;
  auto bit = [n](std::size_t idx, int q) { return (idx >> (n - 1 - q)) & 1U; };
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      bool traced_equal = true;
      for (int q = 0; q < n && traced_equal; ++q) {
        const bool kept = std::find(keep.begin(), keep.end(), q) != keep.end();
        if (!kept && bit(i, q) != bit(j, q)) traced_equal = false;
      }
      if (!traced_equal) continue;
      std::size_t a = 0, b = 0;
      for (int q : keep) {
        a = (a << 1) | bit(i, q);
        b = (b << 1) | bit(j, q);
      }
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  return out;
}

/// Depolarizing evolution through the Pauli-string expansion: each string of
/// weight w decays by e^{-4wt}.
inline Matrix depolarize_pauli(const Matrix& rho, int n, double t) {
  const auto d = static_cast<Eigen::Index>(1) << n;
  Matrix out = Matrix::Zero(d, d);
  std::size_t strings = 1;
  for (int i = 0; i < n; ++i) strings *= 4;
  for (std::size_t s = 0; s < strings; ++s) {
    std::vector<Matrix> ops;
    int weight = 0;
    std::size_t code = s;
    for (int q = 0; q < n; ++q) {
      const int which = static_cast<int>(code % 4);
      code /= 4;
      if (which != 0) ++weight;
      ops.push_back(pauli(which));
    }
    const Matrix p = product(ops);
    const Complex coefficient = (p * rho).trace() / static_cast<double>(d);
    out += coefficient * std::exp(-4.0 * weight * t) * p;
  }
  return out;
}

/// F_n over qubits [first, last) peeling the first qubit:
/// G = 1/2 (a_f + a_f') G_rest + 1/2 (a_f - a_f') G_rest'.
struct Pair {
  Rational f, fp;
};

inline Pair front_peeled(const klyshko::Assignment& asg, int first, int last) {
  if (last - first == 1) return {Rational(2 * asg.a(first)), Rational(2 * asg.a_prime(first))};
  const auto rest = front_peeled(asg, first + 1, last);
  const Rational s(asg.a(first) + asg.a_prime(first), 2), d(asg.a(first) - asg.a_prime(first), 2);
  return {s * rest.f + d * rest.fp, s * rest.fp - d * rest.f};
}

/// Gaussian random pure state.
inline klyshko::PureState random_state(int n, klyshko::Rng& rng) {
  klyshko::Vector v(static_cast<Eigen::Index>(klyshko::dimension(n)));
  for (auto& z : v) z = Complex(klyshko::standard_normal(rng), klyshko::standard_normal(rng));
  return klyshko::PureState::from_amplitudes(n, v);
}

/// Mixture of two random pure states.
inline klyshko::DensityMatrix random_density(int n, klyshko::Rng& rng) {
  const auto a = random_state(n, rng), b = random_state(n, rng);
  const double w = klyshko::uniform01(rng);
  Matrix m = w * a.amplitudes() * a.amplitudes().adjoint() + (1 - w) * b.amplitudes() * b.amplitudes().adjoint();
  return klyshko::DensityMatrix::from_matrix(n, m);
}

}  // namespace oracle
