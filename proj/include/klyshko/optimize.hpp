#pragma once

// Multi-start maximizers over measurement settings and states.
//
// <B_n> is linear in every single direction vector when the others are held
// fixed, so the settings step replaces each vector by its normalized
// coefficient vector (coordinate ascent, closed form). State steps use the
// top eigenvector of the matching effective operator. Every step is therefore
// an exact maximization over one block and the objective never decreases.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "klyshko/bellop.hpp"
#include "klyshko/criteria.hpp"
#include "klyshko/parallel.hpp"
#include "klyshko/qstate.hpp"
#include "klyshko/random.hpp"
#include "klyshko/symstate.hpp"

namespace klyshko {

struct OptimizerConfig {
  int restarts = 20;
  double tol = 1e-12;               // stop a restart once an iteration improves less than this
  std::uint64_t seed = kDefaultSeed;
  int max_iterations = 500;
  double fd_step = 1e-6;            // finite-difference step (search_mm_partial)
  double backtrack = 0.5;           // line-search shrink factor (search_mm_partial)
  std::size_t workers = 1;
};

struct RestartTrace {
  std::vector<double> values;  // objective after each iteration, monotone
  bool converged = false;
};

template <class Arg>
struct OptResult {
  double best_value = 0;
  Arg argmax{};
  std::size_t best_restart = 0;
  int restarts = 0;
  bool minimize = false;
  std::vector<RestartTrace> traces;
  bool converged = false;  // the winning restart met its stopping rule
};

namespace detail {

struct RestartOutcome {
  double value;
  RestartTrace trace;
};

/// Picks the best restart; ties go to the lowest index.
template <class Arg>
OptResult<Arg> reduce_restarts(std::vector<RestartOutcome>& outcomes, std::vector<Arg>& args, bool minimize) {
  OptResult<Arg> r;
  r.restarts = static_cast<int>(outcomes.size());
  r.minimize = minimize;
  std::size_t best = 0;
  for (std::size_t i = 1; i < outcomes.size(); ++i) {
    const bool better = minimize ? outcomes[i].value < outcomes[best].value : outcomes[i].value > outcomes[best].value;
    if (better) best = i;
  }
  r.best_restart = best;
  r.best_value = outcomes[best].value;
  r.argmax = std::move(args[best]);
  r.converged = outcomes[best].trace.converged;
  for (auto& o : outcomes) r.traces.push_back(std::move(o.trace));
  return r;
}

inline double expectation_of(const PureState& s, const Matrix& op) { return s.amplitudes().dot(op * s.amplitudes()).real(); }

inline double expectation_of(const DensityMatrix& rho, const Matrix& op) {
  return (rho.matrix().transpose().cwiseProduct(op)).sum().real();
}

}  // namespace detail

/// Coefficient vector g with <B_n> = g . d for the direction d = (qubit, choice)
/// while the qubit's other direction is set to zero.
template <class State>
Vec3 direction_coefficients(const State& s, const Settings& st, int qubit, int choice) {
  Settings probe = st;
  auto& q = probe.qubits[static_cast<std::size_t>(qubit)];
  q.direction(1 - choice) = Vec3::Zero();
  Vec3 g;
  for (int k = 0; k < 3; ++k) {
    q.direction(choice) = Vec3::Unit(k);
    g(k) = detail::expectation_of(s, bell_operator_pair_unchecked(probe).first);
  }
  return g;
}

/// One pass of closed-form updates over every direction vector.
template <class State>
void coordinate_sweep(const State& s, Settings& st) {
  for (int q = 0; q < st.n(); ++q)
    for (int choice = 0; choice < 2; ++choice) {
      const Vec3 g = direction_coefficients(s, st, q, choice);
      const double norm = g.norm();
      if (norm > 1e-300) st.qubits[static_cast<std::size_t>(q)].direction(choice) = g / norm;
    }
}

/// Maximizes <B_n> over settings for a fixed state.
template <class State>
OptResult<Settings> max_violation_settings(const State& s, const OptimizerConfig& cfg) {
  if (cfg.tol <= 0) throw std::invalid_argument("max_violation_settings: tol must be positive");
  if (s.n() < 1 || s.n() > 10) throw std::out_of_range("max_violation_settings: n must be in [1, 10]");
  std::vector<detail::RestartOutcome> outcomes(static_cast<std::size_t>(cfg.restarts));
  std::vector<Settings> args(outcomes.size());
  parallel_for(outcomes.size(), cfg.workers, [&](std::size_t r) {
    Rng rng(derive_seed(cfg.seed, r));
    Settings st = Settings::random(s.n(), rng);
    RestartTrace trace;
    double value = bell_expectation(s, st);
    trace.values.push_back(value);
    for (int it = 0; it < cfg.max_iterations; ++it) {
      coordinate_sweep(s, st);
      const double next = bell_expectation(s, st);
      trace.values.push_back(next);
      const double gain = next - value;
      value = next;
      if (gain < cfg.tol) {
        trace.converged = true;
        break;
      }
    }
    outcomes[r] = {value, std::move(trace)};
    args[r] = std::move(st);
  });
  auto result = detail::reduce_restarts(outcomes, args, false);
  result.best_value = bell_expectation(s, result.argmax);
  return result;
}

/// Maximizes lambda_max(B_n) over settings by alternating top-eigenvector
/// extraction with a settings sweep on that eigenvector.
inline OptResult<Settings> max_eigen_settings(int n, const OptimizerConfig& cfg) {
  if (n < 1 || n > 10) throw std::out_of_range("max_eigen_settings: n must be in [1, 10]");
  std::vector<detail::RestartOutcome> outcomes(static_cast<std::size_t>(cfg.restarts));
  std::vector<Settings> args(outcomes.size());
  parallel_for(outcomes.size(), cfg.workers, [&](std::size_t r) {
    Rng rng(derive_seed(cfg.seed, r));
    Settings st = Settings::random(n, rng);
    RestartTrace trace;
    auto top = max_eigenpair(bell_operator(st));
    trace.values.push_back(top.value);
    for (int it = 0; it < cfg.max_iterations; ++it) {
      const auto psi = PureState::from_amplitudes(n, top.vector);
      coordinate_sweep(psi, st);
      auto next = max_eigenpair(bell_operator(st));
      const double gain = next.value - top.value;
      // Rayleigh bound: lambda_max(new) >= <psi|B(new)|psi> >= lambda_max(old).
      top = std::move(next);
      trace.values.push_back(top.value);
      if (gain < cfg.tol) {
        trace.converged = true;
        break;
      }
    }
    outcomes[r] = {top.value, std::move(trace)};
    args[r] = std::move(st);
  });
  auto result = detail::reduce_restarts(outcomes, args, false);
  result.best_value = max_eigenpair(bell_operator(result.argmax)).value;
  return result;
}

/// A state of the form (arbitrary block on the first n-m qubits) (x) (m
/// single-qubit pure states), together with settings.
struct ProductBoundArg {
  Settings settings;
  Vector block;              // normalized amplitudes on n-m qubits
  std::vector<Vec3> bloch;   // Bloch vectors of the m trailing qubits

  [[nodiscard]] PureState state() const {
    const int block_qubits = static_cast<int>(std::log2(static_cast<double>(block.size()) + 0.5));
    PureState s = PureState::from_amplitudes(block_qubits, block);
    for (const auto& r : bloch) s = tensor(s, PureState::from_bloch(r));
    return s;
  }
};

namespace detail {

/// <B> restricted to one tensor slot: O[a][b] = <v_a|B|v_b>, where v_a places
/// the slot basis vector a (dimension `slot_dim`, at qubit offset `offset` of
/// width `slot_qubits`) among the fixed factors.
inline Matrix effective_operator(const Matrix& b, int n, const PureState* before, int slot_qubits, const PureState* after) {
  const auto slot_dim = static_cast<Eigen::Index>(dimension(slot_qubits));
  std::vector<Vector> embedded;
  for (Eigen::Index a = 0; a < slot_dim; ++a) {
    PureState v = PureState::basis(slot_qubits, static_cast<std::uint64_t>(a));
    if (before) v = tensor(*before, v);
    if (after) v = tensor(v, *after);
    embedded.push_back(v.amplitudes());
  }
  (void)n;
  Matrix out(slot_dim, slot_dim);
  for (Eigen::Index a = 0; a < slot_dim; ++a) {
    const Vector bv = b * embedded[static_cast<std::size_t>(a)];
    for (Eigen::Index c = 0; c < slot_dim; ++c) out(c, a) = embedded[static_cast<std::size_t>(c)].dot(bv);
  }
  return 0.5 * (out + out.adjoint());
}

inline std::optional<PureState> product_of(const std::vector<Vec3>& bloch, std::size_t first, std::size_t last) {
  std::optional<PureState> s;
  for (std::size_t i = first; i < last; ++i) {
    const auto q = PureState::from_bloch(bloch[i]);
    s = s ? tensor(*s, q) : q;
  }
  return s;
}

inline Vec3 bloch_of(const Vector& qubit) {
  const auto s = PureState::from_amplitudes(1, qubit);
  Vec3 r = bloch_vector(s, 0);
  return r / r.norm();
}

}  // namespace detail

/// Largest <B_n> over states with m independent (product) qubits.
inline OptResult<ProductBoundArg> product_bound_max(int n, int m, const OptimizerConfig& cfg) {
  if (m < 1 || m >= n || n > 8) throw std::out_of_range("product_bound_max: need 1 <= m < n <= 8");
  const int block_qubits = n - m;
  std::vector<detail::RestartOutcome> outcomes(static_cast<std::size_t>(cfg.restarts));
  std::vector<ProductBoundArg> args(outcomes.size());
  parallel_for(outcomes.size(), cfg.workers, [&](std::size_t r) {
    Rng rng(derive_seed(cfg.seed, r));
    ProductBoundArg arg;
    arg.settings = Settings::random(n, rng);
    arg.block = Vector(static_cast<Eigen::Index>(dimension(block_qubits)));
    for (Eigen::Index i = 0; i < arg.block.size(); ++i) arg.block(i) = Complex(standard_normal(rng), standard_normal(rng));
    arg.block.normalize();
    for (int i = 0; i < m; ++i) arg.bloch.push_back(random_unit_vector(rng));

    RestartTrace trace;
    double value = bell_expectation(arg.state(), arg.settings);
    trace.values.push_back(value);
    for (int it = 0; it < cfg.max_iterations; ++it) {
      coordinate_sweep(arg.state(), arg.settings);
      const Matrix b = bell_operator(arg.settings);
      // block step
      {
        const auto tail = detail::product_of(arg.bloch, 0, arg.bloch.size());
        const Matrix eff = detail::effective_operator(b, n, nullptr, block_qubits, tail ? &*tail : nullptr);
        arg.block = max_eigenpair(eff).vector;
      }
      // product-qubit steps
      for (std::size_t i = 0; i < arg.bloch.size(); ++i) {
        PureState head = PureState::from_amplitudes(block_qubits, arg.block);
        if (auto mid = detail::product_of(arg.bloch, 0, i)) head = tensor(head, *mid);
        const auto tail = detail::product_of(arg.bloch, i + 1, arg.bloch.size());
        const Matrix eff = detail::effective_operator(b, n, &head, 1, tail ? &*tail : nullptr);
        arg.bloch[i] = detail::bloch_of(max_eigenpair(eff).vector);
      }
      const double next = bell_expectation(arg.state(), arg.settings);
      trace.values.push_back(next);
      const double gain = next - value;
      value = next;
      if (gain < cfg.tol) {
        trace.converged = true;
        break;
      }
    }
    outcomes[r] = {value, std::move(trace)};
    args[r] = std::move(arg);
  });
  auto result = detail::reduce_restarts(outcomes, args, false);
  result.best_value = bell_expectation(result.argmax.state(), result.argmax.settings);
  return result;
}

// ---------------------------------------------------------------------------
// Maximally-mixed partial-state search

/// Parameters: Re/Im of amplitudes over the normalized symmetric basis, with the
/// imaginary part of the j = 0 amplitude fixed to zero (global phase).
inline NumericSymState symstate_from_parameters(int n, const std::vector<double>& x) {
  std::vector<Complex> c(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) {
    const double re = x[static_cast<std::size_t>(j)];
    const double im = j == 0 ? 0.0 : x[static_cast<std::size_t>(n + j)];
    c[static_cast<std::size_t>(j)] = Complex(re, im) / std::sqrt(static_cast<double>(binomial(n, j)));
  }
  return {n, std::move(c)};
}

/// Minimizes mm_partial_residual over symmetric states with multi-start
/// finite-difference gradient descent and backtracking line search.
inline OptResult<NumericSymState> search_mm_partial(int n, const OptimizerConfig& cfg, double target = 1e-15) {
  if (n < 2 || n > 8) throw std::out_of_range("search_mm_partial: n must be in [2, 8]");
  const std::size_t dims = static_cast<std::size_t>(2 * n + 1);
  auto objective = [n](const std::vector<double>& x) {
    double norm = 0;
    for (double v : x) norm += v * v;
    if (norm < 1e-24) return std::numeric_limits<double>::infinity();
    return mm_partial_residual(symstate_from_parameters(n, x)).residual;
  };

  std::vector<detail::RestartOutcome> outcomes(static_cast<std::size_t>(cfg.restarts));
  std::vector<NumericSymState> args(outcomes.size());
  parallel_for(outcomes.size(), cfg.workers, [&](std::size_t r) {
    Rng rng(derive_seed(cfg.seed, r));
    std::vector<double> x(dims);
    for (double& v : x) v = standard_normal(rng);
    double value = objective(x);
    RestartTrace trace;
    trace.values.push_back(value);
    double step = 1.0;
    std::vector<double> grad(dims), trial(dims);
    for (int it = 0; it < cfg.max_iterations && value > target; ++it) {
      double gnorm2 = 0;
      for (std::size_t i = 0; i < dims; ++i) {
        trial = x;
        trial[i] += cfg.fd_step;
        grad[i] = (objective(trial) - value) / cfg.fd_step;
        gnorm2 += grad[i] * grad[i];
      }
      if (gnorm2 == 0) {
        trace.converged = true;
        break;
      }
      step = std::min(1e3, step * 4.0);
      double next = value;
      bool accepted = false;
      while (step > 1e-14) {
        for (std::size_t i = 0; i < dims; ++i) trial[i] = x[i] - step * grad[i];
        next = objective(trial);
        if (next <= value - 1e-4 * step * gnorm2) {
          accepted = true;
          break;
        }
        step *= cfg.backtrack;
      }
      if (!accepted) {
        trace.converged = true;
        break;
      }
      // keep the parameters on the unit sphere; the objective ignores scale
      double norm = 0;
      for (double v : trial) norm += v * v;
      norm = std::sqrt(norm);
      for (std::size_t i = 0; i < dims; ++i) x[i] = trial[i] / norm;
      const double gain = value - next;
      value = next;
      trace.values.push_back(value);
      if (gain < cfg.tol * 1e-6 && value > target) {
        trace.converged = true;
        break;
      }
    }
    if (value <= target) trace.converged = true;
    outcomes[r] = {value, std::move(trace)};
    args[r] = symstate_from_parameters(n, x);
  });
  auto result = detail::reduce_restarts(outcomes, args, true);
  result.best_value = mm_partial_residual(result.argmax).residual;
  return result;
}

}  // namespace klyshko
