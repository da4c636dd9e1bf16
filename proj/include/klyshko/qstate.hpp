#pragma once

// Dense n-qubit states: construction, tensor products, single-qubit operator
// application, partial traces, spectra and projective measurement.
//
// Qubit convention: qubit 0 is the most significant bit of a basis index, so
// for n qubits qubit q lives in bit (n - 1 - q).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "klyshko/random.hpp"

namespace klyshko {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Matrix2 = Eigen::Matrix2cd;
using Vec3 = Eigen::Vector3d;

inline constexpr int kMaxQubits = 14;

/// Numerical tolerances used by validation and post-condition checks.
namespace tol {
inline constexpr double kNorm = 1e-12;           // state normalization
inline constexpr double kHermitian = 1e-12;      // density matrix hermiticity
inline constexpr double kTrace = 1e-12;          // density matrix trace
inline constexpr double kPositive = 1e-10;       // smallest allowed eigenvalue is -kPositive
inline constexpr double kUnitVector = 1e-12;     // measurement directions
inline constexpr double kHermitianInput = 1e-10; // spectrum() input check
inline constexpr double kProbability = 1e-12;    // outcome tables
}  // namespace tol

inline std::size_t dimension(int n) { return std::size_t{1} << n; }

inline int bit_of(int n, int qubit) { return n - 1 - qubit; }

inline void check_qubit_count(int n) {
  if (n < 1 || n > kMaxQubits)
    throw std::invalid_argument("qubit count " + std::to_string(n) + " outside [1, " +
                                std::to_string(kMaxQubits) + "]");
}

inline void check_qubit(int n, int qubit) {
  if (qubit < 0 || qubit >= n)
    throw std::out_of_range("qubit index " + std::to_string(qubit) + " outside [0, " +
                            std::to_string(n) + ")");
}

inline void check_unit(const Vec3& d) {
  if (std::abs(d.norm() - 1.0) > tol::kUnitVector)
    throw std::invalid_argument("direction is not a unit vector (norm " + std::to_string(d.norm()) + ")");
}

// ---------------------------------------------------------------------------
// Pauli algebra

inline Matrix2 identity2() { return Matrix2::Identity(); }

inline Matrix2 pauli_x() {
  Matrix2 m;
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix2 pauli_y() {
  Matrix2 m;
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

inline Matrix2 pauli_z() {
  Matrix2 m;
  m << 1, 0, 0, -1;
  return m;
}

/// d.sigma for an arbitrary (not necessarily unit) real 3-vector.
inline Matrix2 pauli_dot(const Vec3& d) {
  Matrix2 m;
  m << Complex(d.z(), 0), Complex(d.x(), -d.y()), Complex(d.x(), d.y()), Complex(-d.z(), 0);
  return m;
}

/// Rows are <+d| and <-d|: applying this to a qubit maps the eigenbasis of
/// d.sigma onto the computational basis (bit 0 <-> outcome +1).
inline Matrix2 measurement_rotation(const Vec3& d) {
  const double theta = std::acos(std::clamp(d.z(), -1.0, 1.0));
  const double phi = std::atan2(d.y(), d.x());
  const Complex phase = std::polar(1.0, phi);
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Matrix2 rows;
  rows << c, std::conj(phase) * s,  // <+d|
      s, -std::conj(phase) * c;     // <-d|
  return rows;
}

// ---------------------------------------------------------------------------
// States

class PureState {
 public:
  /// Wraps amplitudes; normalizes unless told otherwise. Throws on the zero vector.
  static PureState from_amplitudes(int n, Vector amp, bool normalize = true) {
    check_qubit_count(n);
    if (static_cast<std::size_t>(amp.size()) != dimension(n))
      throw std::invalid_argument("amplitude vector has length " + std::to_string(amp.size()) +
                                  ", expected " + std::to_string(dimension(n)));
    const double norm = amp.norm();
    if (norm == 0.0) throw std::invalid_argument("zero state vector");
    if (normalize) {
      amp /= norm;
    } else if (std::abs(norm - 1.0) > tol::kNorm) {
      throw std::invalid_argument("state is not normalized (norm " + std::to_string(norm) + ")");
    }
    return PureState(n, std::move(amp));
  }

  static PureState basis(int n, std::uint64_t index) {
    check_qubit_count(n);
    if (index >= dimension(n)) throw std::out_of_range("basis index out of range");
    Vector amp = Vector::Zero(static_cast<Eigen::Index>(dimension(n)));
    amp(static_cast<Eigen::Index>(index)) = 1.0;
    return PureState(n, std::move(amp));
  }

  /// Single-qubit pure state with the given Bloch vector.
  static PureState from_bloch(const Vec3& r) {
    check_unit(r);
    Vector amp = measurement_rotation(r).row(0).adjoint();
    return PureState(1, std::move(amp));
  }

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] std::size_t dim() const { return dimension(n_); }
  [[nodiscard]] const Vector& amplitudes() const { return amp_; }
  [[nodiscard]] Complex operator[](std::size_t i) const { return amp_(static_cast<Eigen::Index>(i)); }

 private:
  PureState(int n, Vector amp) : n_(n), amp_(std::move(amp)) {}

  int n_;
  Vector amp_;
};

class DensityMatrix {
 public:
  static DensityMatrix from_pure(const PureState& psi) {
    return DensityMatrix(psi.n(), psi.amplitudes() * psi.amplitudes().adjoint());
  }

  /// Validates hermiticity, unit trace and positivity.
  static DensityMatrix from_matrix(int n, Matrix mat) {
    check_qubit_count(n);
    const auto d = static_cast<Eigen::Index>(dimension(n));
    if (mat.rows() != d || mat.cols() != d) throw std::invalid_argument("density matrix has wrong shape");
    DensityMatrix rho(n, std::move(mat));
    rho.validate();
    return rho;
  }

  static DensityMatrix maximally_mixed(int n) {
    check_qubit_count(n);
    const auto d = static_cast<Eigen::Index>(dimension(n));
    return DensityMatrix(n, Matrix::Identity(d, d) / static_cast<double>(d));
  }

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] std::size_t dim() const { return dimension(n_); }
  [[nodiscard]] const Matrix& matrix() const { return mat_; }
  [[nodiscard]] double trace() const { return mat_.trace().real(); }
  [[nodiscard]] double purity() const { return (mat_ * mat_).trace().real(); }

  /// Throws std::domain_error if an invariant is violated.
  void validate() const {
    const double herm = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol::kHermitian) throw std::domain_error("density matrix is not Hermitian");
    if (std::abs(trace() - 1.0) > tol::kTrace) throw std::domain_error("density matrix trace != 1");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(mat_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -tol::kPositive)
      throw std::domain_error("density matrix has a negative eigenvalue");
  }

 private:
  friend DensityMatrix make_density_unchecked(int n, Matrix mat);

  DensityMatrix(int n, Matrix mat) : n_(n), mat_(std::move(mat)) {}

  int n_;
  Matrix mat_;
};

/// Builds a density matrix without validation. For internal maps that are
/// trace preserving and completely positive by construction.
inline DensityMatrix make_density_unchecked(int n, Matrix mat) { return DensityMatrix(n, std::move(mat)); }

// ---------------------------------------------------------------------------
// Single-qubit operator application

/// v <- (I (x) .. op on `qubit` .. (x) I) v, in place.
inline void apply_single(Vector& v, int n, int qubit, const Matrix2& op) {
  const std::size_t stride = std::size_t{1} << bit_of(n, qubit);
  const std::size_t d = dimension(n);
  for (std::size_t base = 0; base < d; base += 2 * stride) {
    for (std::size_t off = 0; off < stride; ++off) {
      const auto i0 = static_cast<Eigen::Index>(base + off);
      const auto i1 = static_cast<Eigen::Index>(base + off + stride);
      const Complex a = v(i0), b = v(i1);
      v(i0) = op(0, 0) * a + op(0, 1) * b;
      v(i1) = op(1, 0) * a + op(1, 1) * b;
    }
  }
}

/// rho <- U rho U^dagger with U acting on one qubit.
inline void conjugate_single(Matrix& rho, int n, int qubit, const Matrix2& op) {
  const std::size_t stride = std::size_t{1} << bit_of(n, qubit);
  const std::size_t d = dimension(n);
  const Matrix2 opc = op.conjugate();
  for (std::size_t base = 0; base < d; base += 2 * stride) {
    for (std::size_t off = 0; off < stride; ++off) {
      const auto i0 = static_cast<Eigen::Index>(base + off);
      const auto i1 = static_cast<Eigen::Index>(base + off + stride);
      // rows
      for (Eigen::Index c = 0; c < rho.cols(); ++c) {
        const Complex a = rho(i0, c), b = rho(i1, c);
        rho(i0, c) = op(0, 0) * a + op(0, 1) * b;
        rho(i1, c) = op(1, 0) * a + op(1, 1) * b;
      }
    }
  }
  for (std::size_t base = 0; base < d; base += 2 * stride) {
    for (std::size_t off = 0; off < stride; ++off) {
      const auto i0 = static_cast<Eigen::Index>(base + off);
      const auto i1 = static_cast<Eigen::Index>(base + off + stride);
      // columns
      for (Eigen::Index r = 0; r < rho.rows(); ++r) {
        const Complex a = rho(r, i0), b = rho(r, i1);
        rho(r, i0) = opc(0, 0) * a + opc(0, 1) * b;
        rho(r, i1) = opc(1, 0) * a + opc(1, 1) * b;
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Tensor products

inline PureState tensor(const PureState& a, const PureState& b) {
  if (a.n() + b.n() > kMaxQubits) throw std::length_error("tensor product exceeds the qubit limit");
  Vector amp(static_cast<Eigen::Index>(a.dim() * b.dim()));
  const auto db = static_cast<Eigen::Index>(b.dim());
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(a.dim()); ++i)
    amp.segment(i * db, db) = a.amplitudes()(i) * b.amplitudes();
  return PureState::from_amplitudes(a.n() + b.n(), std::move(amp), false);
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.n() + b.n() > kMaxQubits) throw std::length_error("tensor product exceeds the qubit limit");
  return make_density_unchecked(a.n() + b.n(), kron(a.matrix(), b.matrix()));
}

// ---------------------------------------------------------------------------
// Expectations

inline double pauli_expect(const PureState& s, int qubit, const Vec3& d) {
  check_qubit(s.n(), qubit);
  check_unit(d);
  Vector v = s.amplitudes();
  apply_single(v, s.n(), qubit, pauli_dot(d));
  return s.amplitudes().dot(v).real();
}

inline double pauli_expect(const DensityMatrix& rho, int qubit, const Vec3& d) {
  check_qubit(rho.n(), qubit);
  check_unit(d);
  const std::size_t stride = std::size_t{1} << bit_of(rho.n(), qubit);
  const Matrix2 op = pauli_dot(d);
  const Matrix& m = rho.matrix();
  // Tr(rho (I..op..I)) = sum over pairs of op(a,b) * rho(b,a)
  Complex acc = 0;
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    if (i & stride) continue;
    const auto i0 = static_cast<Eigen::Index>(i), i1 = static_cast<Eigen::Index>(i | stride);
    acc += op(0, 0) * m(i0, i0) + op(0, 1) * m(i1, i0) + op(1, 0) * m(i0, i1) + op(1, 1) * m(i1, i1);
  }
  return acc.real();
}

/// (<sigma_x>, <sigma_y>, <sigma_z>) on one qubit.
template <class State>
Vec3 bloch_vector(const State& s, int qubit) {
  return {pauli_expect(s, qubit, Vec3::UnitX()), pauli_expect(s, qubit, Vec3::UnitY()),
          pauli_expect(s, qubit, Vec3::UnitZ())};
}

inline double fidelity(const PureState& a, const PureState& b) {
  if (a.n() != b.n()) throw std::invalid_argument("fidelity: qubit count mismatch");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

inline double fidelity(const PureState& psi, const DensityMatrix& rho) {
  if (psi.n() != rho.n()) throw std::invalid_argument("fidelity: qubit count mismatch");
  return psi.amplitudes().dot(rho.matrix() * psi.amplitudes()).real();
}

// ---------------------------------------------------------------------------
// Partial trace

namespace detail {

/// Scatter tables: full index = keep_offsets[i] | rest_offsets[t], where i runs
/// over the kept qubits (ascending qubit order, first kept qubit most
/// significant) and t over the traced ones.
struct SplitIndex {
  std::vector<std::size_t> keep_offsets;
  std::vector<std::size_t> rest_offsets;
};

inline std::vector<std::size_t> scatter_offsets(int n, const std::vector<int>& qubits) {
  const int k = static_cast<int>(qubits.size());
  std::vector<std::size_t> out(dimension(k), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::size_t full = 0;
    for (int pos = 0; pos < k; ++pos)
      if (i & (std::size_t{1} << (k - 1 - pos))) full |= std::size_t{1} << bit_of(n, qubits[pos]);
    out[i] = full;
  }
  return out;
}

inline std::vector<int> normalized_subset(int n, std::span<const int> subset) {
  std::vector<int> q(subset.begin(), subset.end());
  std::sort(q.begin(), q.end());
  q.erase(std::unique(q.begin(), q.end()), q.end());
  for (int x : q) check_qubit(n, x);
  return q;
}

inline std::vector<int> complement(int n, const std::vector<int>& subset) {
  std::vector<int> rest;
  for (int q = 0; q < n; ++q)
    if (!std::binary_search(subset.begin(), subset.end(), q)) rest.push_back(q);
  return rest;
}

inline SplitIndex split_index(int n, const std::vector<int>& keep) {
  return {scatter_offsets(n, keep), scatter_offsets(n, complement(n, keep))};
}

}  // namespace detail

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  const auto kept = detail::normalized_subset(rho.n(), keep);
  if (kept.empty() || static_cast<int>(kept.size()) == rho.n())
    throw std::invalid_argument("partial_trace: keep set must be a nonempty proper subset");
  const auto idx = detail::split_index(rho.n(), kept);
  const auto dk = static_cast<Eigen::Index>(idx.keep_offsets.size());
  Matrix out = Matrix::Zero(dk, dk);
  const Matrix& m = rho.matrix();
  for (Eigen::Index i = 0; i < dk; ++i)
    for (Eigen::Index j = 0; j < dk; ++j) {
      Complex acc = 0;
      for (std::size_t t : idx.rest_offsets)
        acc += m(static_cast<Eigen::Index>(idx.keep_offsets[i] | t), static_cast<Eigen::Index>(idx.keep_offsets[j] | t));
      out(i, j) = acc;
    }
  return make_density_unchecked(static_cast<int>(kept.size()), std::move(out));
}

inline DensityMatrix partial_trace(const PureState& psi, std::span<const int> keep) {
  const auto kept = detail::normalized_subset(psi.n(), keep);
  if (kept.empty() || static_cast<int>(kept.size()) == psi.n())
    throw std::invalid_argument("partial_trace: keep set must be a nonempty proper subset");
  const auto idx = detail::split_index(psi.n(), kept);
  Matrix block(static_cast<Eigen::Index>(idx.keep_offsets.size()), static_cast<Eigen::Index>(idx.rest_offsets.size()));
  for (std::size_t i = 0; i < idx.keep_offsets.size(); ++i)
    for (std::size_t t = 0; t < idx.rest_offsets.size(); ++t)
      block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = psi[idx.keep_offsets[i] | idx.rest_offsets[t]];
  return make_density_unchecked(static_cast<int>(kept.size()), block * block.adjoint());
}

// ---------------------------------------------------------------------------
// Spectra

struct Spectrum {
  std::vector<double> values;  // descending

  [[nodiscard]] double max() const { return values.front(); }
  [[nodiscard]] double min() const { return values.back(); }
  [[nodiscard]] double sum() const {
    double s = 0;
    for (double v : values) s += v;
    return s;
  }
};

inline void check_hermitian(const Matrix& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("matrix is not square");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > tol::kHermitianInput * scale)
    throw std::invalid_argument("matrix is not Hermitian");
}

inline Spectrum spectrum(const Matrix& h) {
  check_hermitian(h);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  Spectrum s;
  s.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(s.values.begin(), s.values.end(), std::greater<>());
  return s;
}

inline Spectrum spectrum(const DensityMatrix& rho) { return spectrum(rho.matrix()); }

struct EigenPair {
  double value;
  Vector vector;
};

/// Largest eigenvalue and a unit eigenvector of a Hermitian matrix.
inline EigenPair max_eigenpair(const Matrix& h) {
  check_hermitian(h);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  const Eigen::Index last = solver.eigenvalues().size() - 1;
  return {solver.eigenvalues()(last), solver.eigenvectors().col(last)};
}

/// Power iteration on (H + shift*I). With shift at least the spectral radius,
/// the dominant eigenvalue of the shifted matrix is lambda_max(H) + shift.
/// A negative shift selects ||H||_inf automatically.
inline double power_iteration_max(const Matrix& h, std::uint64_t seed, double shift = -1.0,
                                  double tolerance = 1e-13, int max_iterations = 200000) {
  check_hermitian(h);
  if (shift < 0) shift = h.cwiseAbs().rowwise().sum().maxCoeff();
  Rng rng(seed);
  Vector v(h.rows());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(standard_normal(rng), standard_normal(rng));
  v.normalize();
  double lambda = 0;
  for (int it = 0; it < max_iterations; ++it) {
    Vector w = h * v + shift * v;
    const double next = v.dot(w).real();
    w.normalize();
    v = std::move(w);
    if (it > 0 && std::abs(next - lambda) <= tolerance * std::max(1.0, std::abs(next))) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return v.dot(h * v).real();
}

// ---------------------------------------------------------------------------
// Measurement

/// One Bloch direction per qubit; outcome +1 is the +1 eigenvector of d.sigma.
struct MeasurementBasis {
  std::vector<Vec3> directions;

  static MeasurementBasis uniform(int n, const Vec3& d) { return {std::vector<Vec3>(static_cast<std::size_t>(n), d)}; }
  static MeasurementBasis computational(int n) { return uniform(n, Vec3::UnitZ()); }
  static MeasurementBasis x_basis(int n) { return uniform(n, Vec3::UnitX()); }

  [[nodiscard]] int n() const { return static_cast<int>(directions.size()); }

  void validate(int n_expected) const {
    if (n() != n_expected) throw std::invalid_argument("measurement basis has wrong qubit count");
    for (const auto& d : directions) check_unit(d);
  }
};

/// Outcome index convention: bit (n-1-q) set <=> qubit q gave -1.
inline int outcome_sign(std::size_t outcome_index, int n, int qubit) {
  return (outcome_index >> bit_of(n, qubit)) & 1U ? -1 : +1;
}

inline std::vector<double> outcome_distribution(const PureState& s, const MeasurementBasis& bases) {
  bases.validate(s.n());
  Vector v = s.amplitudes();
  for (int q = 0; q < s.n(); ++q) apply_single(v, s.n(), q, measurement_rotation(bases.directions[static_cast<std::size_t>(q)]));
  std::vector<double> p(s.dim());
  double total = 0;
  for (std::size_t i = 0; i < p.size(); ++i) total += (p[i] = std::norm(v(static_cast<Eigen::Index>(i))));
  for (double& x : p) x /= total;
  return p;
}

inline std::vector<double> outcome_distribution(const DensityMatrix& rho, const MeasurementBasis& bases) {
  bases.validate(rho.n());
  Matrix m = rho.matrix();
  for (int q = 0; q < rho.n(); ++q)
    conjugate_single(m, rho.n(), q, measurement_rotation(bases.directions[static_cast<std::size_t>(q)]));
  std::vector<double> p(rho.dim());
  double total = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::max(0.0, m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real());
    total += p[i];
  }
  for (double& x : p) x /= total;
  return p;
}

/// Cumulative table for repeated sampling from a fixed distribution.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(std::span<const double> probabilities) : cdf_(probabilities.size()) {
    double acc = 0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) cdf_[i] = (acc += probabilities[i]);
    if (acc <= 0) throw std::invalid_argument("cannot sample from an all-zero distribution");
    for (double& c : cdf_) c /= acc;
    cdf_.back() = 1.0;
  }

  std::size_t operator()(Rng& rng) const {
    const double u = uniform01(rng);
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    // Skip zero-width bins at the top end.
    return static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cdf_.begin(), static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
  }

 private:
  std::vector<double> cdf_;
};

struct MeasurementOutcome {
  std::vector<int> measured;          // ascending qubit indices
  std::vector<int> outcomes;          // +1 / -1, aligned with `measured`
  double probability = 0;             // Born probability of this joint outcome
  std::optional<PureState> post;      // state of the unmeasured qubits, if any remain
  std::vector<int> remaining;         // their original indices, ascending
};

/// Projective measurement of `subset` (each qubit along its basis direction),
/// sampled by the Born rule from an Rng seeded with `seed`.
inline MeasurementOutcome measure_sample(const PureState& s, const MeasurementBasis& bases,
                                         std::span<const int> subset, std::uint64_t seed) {
  bases.validate(s.n());
  const auto measured = detail::normalized_subset(s.n(), subset);
  if (measured.empty()) throw std::invalid_argument("measure_sample: empty qubit subset");
  const int n = s.n();
  const int k = static_cast<int>(measured.size());

  Vector v = s.amplitudes();
  for (int q : measured) apply_single(v, n, q, measurement_rotation(bases.directions[static_cast<std::size_t>(q)]));

  const auto idx = detail::split_index(n, measured);
  std::vector<double> marginal(idx.keep_offsets.size(), 0.0);
  for (std::size_t i = 0; i < idx.keep_offsets.size(); ++i)
    for (std::size_t t : idx.rest_offsets) marginal[i] += std::norm(v(static_cast<Eigen::Index>(idx.keep_offsets[i] | t)));

  Rng rng(seed);
  const std::size_t pick = DiscreteSampler(marginal)(rng);
  if (marginal[pick] <= 0) throw std::logic_error("measure_sample: sampled a zero-probability branch");

  MeasurementOutcome out;
  out.measured = measured;
  out.probability = marginal[pick];
  for (int pos = 0; pos < k; ++pos) out.outcomes.push_back((pick >> (k - 1 - pos)) & 1U ? -1 : +1);
  out.remaining = detail::complement(n, measured);
  if (!out.remaining.empty()) {
    Vector post(static_cast<Eigen::Index>(idx.rest_offsets.size()));
    for (std::size_t t = 0; t < idx.rest_offsets.size(); ++t)
      post(static_cast<Eigen::Index>(t)) = v(static_cast<Eigen::Index>(idx.keep_offsets[pick] | idx.rest_offsets[t]));
    out.post = PureState::from_amplitudes(n - k, std::move(post));
  }
  return out;
}

}  // namespace klyshko
