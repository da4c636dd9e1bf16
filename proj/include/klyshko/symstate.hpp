#pragma once

// Symmetric n-qubit states over the unnormalized basis |j,n> (the sum of all
// computational basis states with j ones). Coefficients are exact Gaussian
// rationals for the basis-change identities; a floating-point instantiation
// carries states with irrational amplitudes.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "klyshko/qstate.hpp"
#include "klyshko/rational.hpp"

namespace klyshko {

/// Single-qubit carrier convention for each basis label (unnormalized):
///   z: |0>, |1>
///   x: |0>_x = |0> - |1>,  |1>_x = |0> + |1>
///   y: |0>_y = |0> + i|1>, |1>_y = i|0> + |1>
enum class Basis { z, x, y };

inline const char* to_string(Basis b) {
  switch (b) {
    case Basis::z: return "z";
    case Basis::x: return "x";
    case Basis::y: return "y";
  }
  return "?";
}

inline Basis parse_basis(const std::string& s) {
  if (s == "z") return Basis::z;
  if (s == "x") return Basis::x;
  if (s == "y") return Basis::y;
  throw std::invalid_argument("unknown basis label '" + s + "'");
}

template <class Scalar>
struct BasicSymState {
  int n = 0;
  std::vector<Scalar> coeff;  // n + 1 entries, coefficient of |j,n>
  Basis basis = Basis::z;

  BasicSymState() = default;
  BasicSymState(int qubits, std::vector<Scalar> c, Basis b = Basis::z) : n(qubits), coeff(std::move(c)), basis(b) {
    check_qubit_count(n);
    if (coeff.size() != static_cast<std::size_t>(n) + 1)
      throw std::invalid_argument("symmetric state needs n+1 coefficients");
  }
};

using SymState = BasicSymState<ComplexRational>;
using NumericSymState = BasicSymState<Complex>;

inline Complex to_complex(const ComplexRational& z) { return z.to_complex(); }
inline Complex to_complex(const Complex& z) { return z; }

inline NumericSymState to_numeric(const SymState& s) {
  std::vector<Complex> c;
  c.reserve(s.coeff.size());
  for (const auto& z : s.coeff) c.push_back(z.to_complex());
  return {s.n, std::move(c), s.basis};
}

/// <j,n|k,n> = delta_jk C(n,j).
inline std::int64_t inner(int j, int k, int n) {
  if (n < 0 || j < 0 || k < 0 || j > n || k > n)
    throw std::out_of_range("inner: indices must satisfy 0 <= j,k <= n");
  return j == k ? binomial(n, j) : 0;
}

/// Exact squared norm sum_j |c_j|^2 C(n,j) of a z-basis state.
inline Rational squared_norm(const SymState& s) {
  Rational acc = 0;
  for (int j = 0; j <= s.n; ++j) acc += s.coeff[static_cast<std::size_t>(j)].norm() * Rational(binomial(s.n, j));
  return acc;
}

inline SymState dicke(int j, int n) {
  if (j < 0 || j > n) throw std::out_of_range("dicke: j outside [0, n]");
  std::vector<ComplexRational> c(static_cast<std::size_t>(n) + 1);
  c[static_cast<std::size_t>(j)] = 1;
  return {n, std::move(c)};
}

/// |0,n> + sign |n,n>.
inline SymState ghz(int n, int sign = +1) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("ghz: sign must be +1 or -1");
  std::vector<ComplexRational> c(static_cast<std::size_t>(n) + 1);
  c.front() += 1;
  c.back() += sign;
  return {n, std::move(c)};
}

namespace detail {

template <class Scalar>
Scalar carrier_amplitude(Basis b, int carrier_bit, int z_bit) {
  switch (b) {
    case Basis::z: return carrier_bit == z_bit ? Scalar(1) : Scalar(0);
    case Basis::x:
      // |0>_x = |0> - |1>, |1>_x = |0> + |1>
      return (carrier_bit == 0 && z_bit == 1) ? Scalar(-1) : Scalar(1);
    case Basis::y:
      // |0>_y = |0> + i|1>, |1>_y = i|0> + |1>
      if (carrier_bit == z_bit) return Scalar(1);
      if constexpr (std::is_same_v<Scalar, ComplexRational>) return ComplexRational::i();
      else return Scalar(0, 1);
  }
  return Scalar(0);
}

}  // namespace detail

/// Unnormalized amplitudes in the computational product basis (qubit 0 =
/// most significant bit). Exact for ComplexRational coefficients.
template <class Scalar>
std::vector<Scalar> expand(const BasicSymState<Scalar>& s) {
  const int n = s.n;
  const std::size_t d = dimension(n);
  std::vector<Scalar> out(d, Scalar(0));
  if (s.basis == Basis::z) {
    for (std::size_t i = 0; i < d; ++i) out[i] = s.coeff[static_cast<std::size_t>(std::popcount(i))];
    return out;
  }
  // Sum over carrier strings b with weight c_{|b|} of the product of carrier kets.
  // The result is permutation symmetric, so one z per Hamming weight suffices.
  std::vector<Scalar> by_weight(static_cast<std::size_t>(n) + 1, Scalar(0));
  for (int w = 0; w <= n; ++w) {
    const std::size_t z = (std::size_t{1} << w) - 1;
    for (std::size_t b = 0; b < d; ++b) {
      const Scalar& c = s.coeff[static_cast<std::size_t>(std::popcount(b))];
      if (c == Scalar(0)) continue;
      Scalar term = c;
      for (int q = 0; q < n && !(term == Scalar(0)); ++q) {
        const int bit = bit_of(n, q);
        term *= detail::carrier_amplitude<Scalar>(s.basis, static_cast<int>((b >> bit) & 1U),
                                                  static_cast<int>((z >> bit) & 1U));
      }
      by_weight[static_cast<std::size_t>(w)] += term;
    }
  }
  for (std::size_t z = 0; z < d; ++z) out[z] = by_weight[static_cast<std::size_t>(std::popcount(z))];
  return out;
}

/// Normalized dense state. Non-z labels are expanded first.
template <class Scalar>
PureState embed(const BasicSymState<Scalar>& s) {
  const auto amps = expand(s);
  Vector v(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t i = 0; i < amps.size(); ++i) v(static_cast<Eigen::Index>(i)) = to_complex(amps[i]);
  if (v.norm() == 0.0) throw std::invalid_argument("embed: zero symmetric state");
  return PureState::from_amplitudes(s.n, std::move(v));
}

/// If a == s * b for a single scalar s, returns s. Both zero vectors give nullopt.
inline std::optional<ComplexRational> proportionality(const std::vector<ComplexRational>& a,
                                                      const std::vector<ComplexRational>& b) {
  if (a.size() != b.size()) return std::nullopt;
  std::optional<ComplexRational> scale;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b[i].is_zero()) {
      if (!a[i].is_zero()) return std::nullopt;
      continue;
    }
    const ComplexRational ratio = a[i] / b[i];
    if (!scale) scale = ratio;
    else if (!(*scale == ratio)) return std::nullopt;
  }
  return scale;
}

// ---------------------------------------------------------------------------
// Splitting |j,n> across the first m and last n-m qubits

struct SplitTerm {
  int k;                    // ones among the first m qubits
  std::int64_t coefficient; // always 1 for this identity
};

/// |j,n> = sum_k |k,m> (x) |j-k,n-m>.
inline std::vector<SplitTerm> split(int j, int n, int m) {
  if (m < 1 || m >= n) throw std::out_of_range("split: need 1 <= m < n");
  if (j < 0 || j > n) throw std::out_of_range("split: j outside [0, n]");
  std::vector<SplitTerm> terms;
  for (int k = std::max(0, j - (n - m)); k <= std::min(j, m); ++k) terms.push_back({k, 1});
  return terms;
}

/// Exact product-basis vector of the right-hand side of split().
inline std::vector<ComplexRational> expand_split(int j, int n, int m) {
  std::vector<ComplexRational> out(dimension(n));
  const std::size_t d_tail = dimension(n - m);
  for (const auto& term : split(j, n, m)) {
    const auto head = expand(dicke(term.k, m));
    const auto tail = expand(dicke(j - term.k, n - m));
    for (std::size_t h = 0; h < head.size(); ++h)
      for (std::size_t t = 0; t < tail.size(); ++t) out[h * d_tail + t] += Rational(term.coefficient) * head[h] * tail[t];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Basis changes

/// Target-basis coefficients plus the global scalar relating their product-basis
/// expansion to the input: expand(state) == scale * expand(input).
struct BasisChange {
  SymState state;
  ComplexRational scale;
};

/// Row of the z->x transform: |j,n>_z = sum_l row[l] |l,n>_x (up to the global
/// factor 2^n). Summation limits are floor((j-l)/2) style: terms are taken for
/// every k keeping both binomial arguments non-negative.
inline std::vector<std::int64_t> z_to_x_row(int j, int n) {
  std::vector<std::int64_t> row(static_cast<std::size_t>(n) + 1, 0);
  for (int l = 0; l <= n; ++l) {
    std::int64_t even = 0, odd = 0;
    for (int k = 0; j - 2 * k >= 0; ++k) even += binomial(l, j - 2 * k) * binomial(n - l, 2 * k);
    for (int k = 0; j - 2 * k - 1 >= 0; ++k) odd += binomial(l, j - 2 * k - 1) * binomial(n - l, 2 * k + 1);
    row[static_cast<std::size_t>(l)] = even - odd;
  }
  return row;
}

namespace detail {

inline ComplexRational measured_scale(const SymState& converted, const SymState& input) {
  const auto scale = proportionality(expand(converted), expand(input));
  if (!scale) throw std::logic_error("basis change is not proportional to its input");
  return *scale;
}

}  // namespace detail

inline BasisChange z_to_x(const SymState& s) {
  if (s.basis != Basis::z) throw std::invalid_argument("z_to_x: input must be in the z basis");
  std::vector<ComplexRational> out(static_cast<std::size_t>(s.n) + 1);
  for (int j = 0; j <= s.n; ++j) {
    const auto& c = s.coeff[static_cast<std::size_t>(j)];
    if (c.is_zero()) continue;
    const auto row = z_to_x_row(j, s.n);
    for (int l = 0; l <= s.n; ++l) out[static_cast<std::size_t>(l)] += c * Rational(row[static_cast<std::size_t>(l)]);
  }
  SymState x{s.n, std::move(out), Basis::x};
  if (std::all_of(x.coeff.begin(), x.coeff.end(), [](const auto& z) { return z.is_zero(); }))
    throw std::invalid_argument("z_to_x: zero state");
  const auto scale = detail::measured_scale(x, s);
  return {std::move(x), scale};
}

/// Row of the z->y transform: with |0>_z = (|0>_y - i|1>_y)/2 and
/// |1>_z = (|1>_y - i|0>_y)/2, counting r z-ones that land on y-ones gives
///   |j,n>_z = 2^-n sum_l [sum_r C(l,r) C(n-l,j-r) (-i)^(j+l-2r)] |l,n>_y.
/// Returned without the 2^-n factor.
inline std::vector<ComplexRational> z_to_y_row(int j, int n) {
  std::vector<ComplexRational> row(static_cast<std::size_t>(n) + 1);
  for (int l = 0; l <= n; ++l)
    for (int r = 0; r <= std::min(j, l); ++r) {
      const std::int64_t ways = binomial(l, r) * binomial(n - l, j - r);
      if (ways == 0) continue;
      row[static_cast<std::size_t>(l)] += Rational(ways) * i_pow(-(j + l - 2 * r));
    }
  return row;
}

inline BasisChange z_to_y(const SymState& s) {
  if (s.basis != Basis::z) throw std::invalid_argument("z_to_y: input must be in the z basis");
  std::vector<ComplexRational> out(static_cast<std::size_t>(s.n) + 1);
  for (int j = 0; j <= s.n; ++j) {
    const auto& c = s.coeff[static_cast<std::size_t>(j)];
    if (c.is_zero()) continue;
    const auto row = z_to_y_row(j, s.n);
    for (int l = 0; l <= s.n; ++l) out[static_cast<std::size_t>(l)] += c * row[static_cast<std::size_t>(l)];
  }
  SymState y{s.n, std::move(out), Basis::y};
  if (std::all_of(y.coeff.begin(), y.coeff.end(), [](const auto& z) { return z.is_zero(); }))
    throw std::invalid_argument("z_to_y: zero state");
  const auto scale = detail::measured_scale(y, s);
  return {std::move(y), scale};
}

/// Closed x-basis form of |0,n> + sign|n,n>: the sum of |l,n>_x over l with
/// n - l even (sign +1) or odd (sign -1). For even n this is the even-l sum for
/// the + sign; for odd n the parities swap.
inline SymState ghz_x_form(int n, int sign = +1) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("ghz_x_form: sign must be +1 or -1");
  std::vector<ComplexRational> c(static_cast<std::size_t>(n) + 1);
  for (int l = 0; l <= n; ++l)
    if (((n - l) % 2 == 0) == (sign > 0)) c[static_cast<std::size_t>(l)] = 1;
  return {n, std::move(c), Basis::x};
}

/// Closed y-basis form of |0,n> + sign|n,n>: coefficients i^k + sign i^(n-k).
inline SymState ghz_y_form(int n, int sign = +1) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("ghz_y_form: sign must be +1 or -1");
  std::vector<ComplexRational> c(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) c[static_cast<std::size_t>(k)] = i_pow(k) + Rational(sign) * i_pow(n - k);
  return {n, std::move(c), Basis::y};
}

/// z -> {z, x, y} dispatcher.
inline BasisChange change_basis(const SymState& s, Basis target) {
  if (s.basis != Basis::z) throw std::invalid_argument("change_basis: only z inputs are supported");
  switch (target) {
    case Basis::z: return {s, ComplexRational(1)};
    case Basis::x: return z_to_x(s);
    case Basis::y: return z_to_y(s);
  }
  throw std::invalid_argument("change_basis: unknown target");
}

// ---------------------------------------------------------------------------
// GHZ-type basis of the full space

/// (|b> + sign |~b>)/sqrt(2), ~b the bitwise complement of b.
struct BellBasisState {
  int n;
  std::uint64_t bits;
  int sign;

  [[nodiscard]] PureState to_pure() const {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dimension(n)));
    const std::uint64_t mask = dimension(n) - 1;
    v(static_cast<Eigen::Index>(bits)) = 1.0;
    v(static_cast<Eigen::Index>(~bits & mask)) = static_cast<double>(sign);
    return PureState::from_amplitudes(n, std::move(v));
  }
};

/// All 2^n states with the leading bit of b fixed to 0, both signs.
inline std::vector<BellBasisState> bell_basis(int n) {
  if (n < 2 || n > kMaxQubits) throw std::out_of_range("bell_basis: need 2 <= n <= 14");
  std::vector<BellBasisState> out;
  out.reserve(dimension(n));
  for (std::uint64_t b = 0; b < dimension(n - 1); ++b)
    for (int sign : {+1, -1}) out.push_back({n, b, sign});
  return out;
}

}  // namespace klyshko
