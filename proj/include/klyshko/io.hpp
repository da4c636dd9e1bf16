#pragma once

// JSON forms of states, settings and reports.
//
//   PureState       {"n": 3, "amp": [[re, im], ...]}
//   DensityMatrix   {"n": 3, "rho": [[[re, im], ...], ...]}
//   SymState        {"n": 3, "basis": "z", "coeff": [["1", "0"], ["1/2", "-1"], ...]}
//                   (numbers instead of strings give a numeric state)
//   Settings        [{"a": [x, y, z], "a_prime": [x, y, z]}, ...]

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "klyshko/bellop.hpp"
#include "klyshko/certify.hpp"
#include "klyshko/criteria.hpp"
#include "klyshko/optimize.hpp"
#include "klyshko/qstate.hpp"
#include "klyshko/symstate.hpp"

namespace klyshko {

using json = nlohmann::json;

/// Thrown for input documents that do not match the expected shape.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline json complex_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw FormatError("expected a number or [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json vec3_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

inline Vec3 vec3_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw FormatError("expected a 3-vector");
  for (const auto& x : j)
    if (!x.is_number()) throw FormatError("expected a 3-vector of numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline json rational_json(const ComplexRational& z) { return json::array({to_string(z.re), to_string(z.im)}); }

inline int qubit_count_from(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer()) throw FormatError("missing integer field 'n'");
  const int n = j["n"].get<int>();
  if (n < 1 || n > kMaxQubits) throw FormatError("'n' out of range");
  return n;
}

// ---------------------------------------------------------------------------
// States

inline json to_json_value(const PureState& s) {
  json amp = json::array();
  for (std::size_t i = 0; i < s.dim(); ++i) amp.push_back(complex_json(s[i]));
  return {{"n", s.n()}, {"amp", amp}};
}

inline json to_json_value(const DensityMatrix& rho) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < rho.matrix().rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < rho.matrix().cols(); ++c) row.push_back(complex_json(rho.matrix()(r, c)));
    rows.push_back(row);
  }
  return {{"n", rho.n()}, {"rho", rows}};
}

inline json to_json_value(const SymState& s) {
  json c = json::array();
  for (const auto& z : s.coeff) c.push_back(rational_json(z));
  return {{"n", s.n}, {"basis", to_string(s.basis)}, {"coeff", c}};
}

inline json to_json_value(const NumericSymState& s) {
  json c = json::array();
  for (const auto& z : s.coeff) c.push_back(complex_json(z));
  return {{"n", s.n}, {"basis", to_string(s.basis)}, {"coeff", c}};
}

inline PureState pure_from(const json& j) {
  const int n = qubit_count_from(j);
  const auto& amp = j.at("amp");
  if (!amp.is_array() || amp.size() != dimension(n)) throw FormatError("'amp' must hold 2^n entries");
  Vector v(static_cast<Eigen::Index>(amp.size()));
  for (std::size_t i = 0; i < amp.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from(amp[i]);
  return PureState::from_amplitudes(n, std::move(v));
}

inline DensityMatrix density_from(const json& j) {
  const int n = qubit_count_from(j);
  const auto& rows = j.at("rho");
  const auto d = dimension(n);
  if (!rows.is_array() || rows.size() != d) throw FormatError("'rho' must have 2^n rows");
  Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < d; ++r) {
    if (!rows[r].is_array() || rows[r].size() != d) throw FormatError("'rho' must be square");
    for (std::size_t c = 0; c < d; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from(rows[r][c]);
  }
  return DensityMatrix::from_matrix(n, std::move(m));
}

/// True when every coefficient is given as an exact string pair.
inline bool is_exact_symstate(const json& j) {
  for (const auto& c : j.at("coeff"))
    if (!(c.is_string() || (c.is_array() && c.size() == 2 && c[0].is_string() && c[1].is_string()))) return false;
  return true;
}

inline SymState symstate_from(const json& j) {
  const int n = qubit_count_from(j);
  const auto& coeff = j.at("coeff");
  if (!coeff.is_array() || coeff.size() != static_cast<std::size_t>(n) + 1) throw FormatError("'coeff' must hold n+1 entries");
  std::vector<ComplexRational> c;
  for (const auto& z : coeff) {
    if (z.is_string())
      c.emplace_back(parse_rational(z.get<std::string>()));
    else if (z.is_array() && z.size() == 2 && z[0].is_string() && z[1].is_string())
      c.emplace_back(parse_rational(z[0].get<std::string>()), parse_rational(z[1].get<std::string>()));
    else
      throw FormatError("exact coefficients must be \"p/q\" strings or [re, im] string pairs");
  }
  return {n, std::move(c), parse_basis(j.value("basis", std::string("z")))};
}

inline NumericSymState numeric_symstate_from(const json& j) {
  if (is_exact_symstate(j)) return to_numeric(symstate_from(j));
  const int n = qubit_count_from(j);
  const auto& coeff = j.at("coeff");
  if (!coeff.is_array() || coeff.size() != static_cast<std::size_t>(n) + 1) throw FormatError("'coeff' must hold n+1 entries");
  std::vector<Complex> c;
  for (const auto& z : coeff) c.push_back(complex_from(z));
  return {n, std::move(c), parse_basis(j.value("basis", std::string("z")))};
}

/// Any state document: symmetric states are embedded as pure states.
using AnyState = std::variant<PureState, DensityMatrix>;

inline AnyState any_state_from(const json& j) {
  if (!j.is_object()) throw FormatError("state document must be an object");
  if (j.contains("amp")) return pure_from(j);
  if (j.contains("rho")) return density_from(j);
  if (j.contains("coeff")) return embed(numeric_symstate_from(j));
  throw FormatError("state document needs 'amp', 'rho' or 'coeff'");
}

// ---------------------------------------------------------------------------
// Settings

inline json to_json_value(const Settings& st) {
  json out = json::array();
  for (const auto& q : st.qubits) out.push_back({{"a", vec3_json(q.a)}, {"a_prime", vec3_json(q.a_prime)}});
  return out;
}

inline Settings settings_from(const json& j) {
  if (!j.is_array() || j.empty()) throw FormatError("settings must be a non-empty array");
  Settings st;
  for (const auto& q : j) {
    if (!q.is_object() || !q.contains("a") || !q.contains("a_prime")) throw FormatError("each qubit needs 'a' and 'a_prime'");
    st.qubits.push_back({vec3_from(q["a"]), vec3_from(q["a_prime"])});
  }
  try {
    st.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return st;
}

// ---------------------------------------------------------------------------
// Reports

inline json to_json_value(const ProductBoundArg& a) {
  json bloch = json::array();
  for (const auto& r : a.bloch) bloch.push_back(vec3_json(r));
  json block = json::array();
  for (Eigen::Index i = 0; i < a.block.size(); ++i) block.push_back(complex_json(a.block(i)));
  return {{"settings", to_json_value(a.settings)}, {"block", block}, {"product_bloch", bloch}};
}

template <class Arg>
json to_json_value(const OptResult<Arg>& r) {
  json traces = json::array();
  for (const auto& t : r.traces) traces.push_back({{"values", t.values}, {"converged", t.converged}});
  return {{r.minimize ? "best_min" : "best_max", r.best_value},
          {"argbest", to_json_value(r.argmax)},
          {"best_restart", r.best_restart},
          {"restarts", r.restarts},
          {"converged", r.converged},
          {"traces", traces}};
}

inline json to_json_value(const CertResult& c) {
  return {{"n", c.n},
          {"E", c.E},
          {"epsilon", c.epsilon},
          {"thresholds", c.thresholds},
          {"max_consistent_independent", c.max_consistent_independent},
          {"certified_entangled", c.certified_entangled},
          {"valid", c.valid},
          {"flags", c.flags}};
}

inline json to_json_value(const Estimate& e) { return {{"E_hat", e.value}, {"standard_error", e.standard_error}}; }

inline json to_json_value(const FragilityReport& f) {
  json bloch = json::array();
  for (const auto& r : f.bloch) bloch.push_back(vec3_json(r));
  return {{"bloch", bloch}, {"fragility", f.fragility}, {"is_maximal", f.is_maximal}};
}

inline json to_json_value(const MMResidual& m) {
  return {{"m", m.m}, {"observed", m.observed}, {"target", m.target}, {"residual", m.residual}};
}

inline json to_json_value(const DistributeReport& d) {
  return {{"n", d.n},
          {"k", d.k},
          {"trials", d.trials},
          {"x_passes", d.x_passes},
          {"min_fidelity", d.min_fidelity},
          {"z_passes", d.z_passes},
          {"max_z_entanglement", d.max_z_entanglement},
          {"pass", d.pass}};
}

inline json to_json_value(const Rho3Report& r) {
  return {{"rho", to_json_value(r.rho)},
          {"printed_settings", to_json_value(r.printed_settings)},
          {"E_at_printed_angles", r.E_at_printed_angles},
          {"printed_value", r.printed_value},
          {"maximum", to_json_value(r.maximum)},
          {"certificate", to_json_value(r.certificate)},
          {"note", r.note}};
}

inline json to_json_value(const BasisChange& b) {
  return {{"state", to_json_value(b.state)}, {"scale", rational_json(b.scale)}};
}

// ---------------------------------------------------------------------------
// Files

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("'" + path + "': " + e.what());
  }
}

// ---------------------------------------------------------------------------
// State specs: a file path or one of
//   ghz:N  ghz-:N  dicke:J:N  zero:N  sme:N,I (e.g. sme:6,-3)

namespace detail {

inline std::vector<std::string> split_spec(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) out.push_back(part);
  return out;
}

inline int spec_int(const std::string& s, const std::string& spec) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw FormatError("bad integer in state spec '" + spec + "'");
  return v;
}

}  // namespace detail

/// Exact symmetric state from a spec; nullopt for specs that are not exact
/// symmetric states (sme: examples, dense documents).
inline std::optional<SymState> exact_symstate_spec(const std::string& spec) {
  const auto parts = detail::split_spec(spec, ':');
  if (parts.size() == 2 && (parts[0] == "ghz" || parts[0] == "ghz-"))
    return ghz(detail::spec_int(parts[1], spec), parts[0] == "ghz" ? +1 : -1);
  if (parts.size() == 2 && parts[0] == "zero") return dicke(0, detail::spec_int(parts[1], spec));
  if (parts.size() == 3 && parts[0] == "dicke") return dicke(detail::spec_int(parts[1], spec), detail::spec_int(parts[2], spec));
  if (parts.size() >= 2 && (parts[0] == "sme")) return std::nullopt;
  const json doc = read_json_file(spec);
  if (doc.is_object() && doc.contains("coeff") && is_exact_symstate(doc)) return symstate_from(doc);
  return std::nullopt;
}

inline std::optional<NumericSymState> symstate_spec(const std::string& spec) {
  const auto parts = detail::split_spec(spec, ':');
  if (parts.size() == 2 && parts[0] == "sme") return sme_example(parts[1]);
  if (auto exact = exact_symstate_spec(spec)) return to_numeric(*exact);
  const json doc = read_json_file(spec);
  if (doc.is_object() && doc.contains("coeff")) return numeric_symstate_from(doc);
  return std::nullopt;
}

inline AnyState state_spec(const std::string& spec) {
  if (auto s = symstate_spec(spec)) return embed(*s);
  return any_state_from(read_json_file(spec));
}

}  // namespace klyshko
