#pragma once

// Exact rational and complex-rational scalars for the classical Bell
// polynomial and the symmetric-state algebra.

#include <complex>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace klyshko {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Parses "p", "-p" or "p/q".
inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) -> std::int64_t {
    if (s.empty()) throw std::invalid_argument("empty rational component in '" + std::string(text) + "'");
    std::size_t used = 0;
    const auto value = std::stoll(std::string(s), &used);
    if (used != s.size()) throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    return value;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  const auto den = parse_int(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  return Rational(parse_int(text.substr(0, slash)), den);
}

/// Exact Gaussian rational re + i*im.
struct ComplexRational {
  Rational re{0};
  Rational im{0};

  ComplexRational() = default;
  ComplexRational(Rational r) : re(r) {}  // NOLINT(google-explicit-constructor)
  ComplexRational(std::int64_t r) : re(r) {}  // NOLINT(google-explicit-constructor)
  ComplexRational(Rational r, Rational i) : re(r), im(i) {}

  static ComplexRational i() { return {Rational(0), Rational(1)}; }

  ComplexRational& operator+=(const ComplexRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  ComplexRational& operator-=(const ComplexRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  ComplexRational& operator*=(const ComplexRational& o) {
    const Rational r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = r;
    return *this;
  }
  ComplexRational& operator/=(const ComplexRational& o) {
    const Rational den = o.norm();
    if (den.numerator() == 0) throw std::domain_error("division by zero complex rational");
    *this *= o.conj();
    re /= den;
    im /= den;
    return *this;
  }

  [[nodiscard]] ComplexRational conj() const { return {re, -im}; }
  /// |z|^2, exact.
  [[nodiscard]] Rational norm() const { return re * re + im * im; }
  [[nodiscard]] bool is_zero() const { return re.numerator() == 0 && im.numerator() == 0; }
  [[nodiscard]] std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }

  friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
  friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
  friend ComplexRational operator*(ComplexRational a, const ComplexRational& b) { return a *= b; }
  friend ComplexRational operator/(ComplexRational a, const ComplexRational& b) { return a /= b; }
  friend ComplexRational operator-(const ComplexRational& a) { return {-a.re, -a.im}; }
  friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
    return a.re == b.re && a.im == b.im;
  }

  friend std::ostream& operator<<(std::ostream& os, const ComplexRational& z) {
    return os << to_string(z.re) << (z.im.numerator() < 0 ? "-" : "+") << to_string(boost::abs(z.im)) << "i";
  }
};

/// i^k for any integer k.
inline ComplexRational i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {Rational(1), Rational(0)};
    case 1: return {Rational(0), Rational(1)};
    case 2: return {Rational(-1), Rational(0)};
    default: return {Rational(0), Rational(-1)};
  }
}

/// Binomial coefficient C(n, k); zero outside 0 <= k <= n.
inline std::int64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t result = 1;
  for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

}  // namespace klyshko
