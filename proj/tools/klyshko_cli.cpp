// klyshko: command-line front end.
//
// Exit codes: 0 success, 1 a checked property failed, 2 usage or input error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "klyshko/klyshko.hpp"
#include "klyshko/verification.hpp"

namespace {

using namespace klyshko;

constexpr int kExitOk = 0;
constexpr int kExitProperty = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  int n = 3;
  std::uint64_t seed = kDefaultSeed;
  int restarts = 20;
  double tol = 1e-12;
  int shots = 100000;
  std::string state;
  std::string settings;
  std::string out;
  std::string format = "json";
  std::size_t workers = 1;

  // command-specific
  double E = -1;
  bool estimate = false;
  std::string which = "fragility";
  std::string bases = "z";
  std::string from = "z";
  std::string to = "x";
  int m = 1;
  int k = 1;
  int trials = 200;
  std::vector<int> only;
  bool traces = false;

  [[nodiscard]] json echo() const {
    json j = {{"command", command}, {"n", n},         {"seed", seed},     {"restarts", restarts},
              {"tol", tol},         {"shots", shots}, {"state", state},   {"settings", settings},
              {"out", out},         {"format", format}, {"workers", workers}};
    if (command == "certify") {
      j["E"] = E;
      j["estimate"] = estimate;
    }
    if (command == "criteria") {
      j["which"] = which;
      j["bases"] = bases;
      j["k"] = k;
      j["trials"] = trials;
    }
    if (command == "basis") {
      j["from"] = from;
      j["to"] = to;
    }
    if (command == "product-bound") j["m"] = m;
    if (command == "verify") j["only"] = only;
    if (command == "bellmax" || command == "product-bound" || command == "search-mm" || command == "rho3")
      j["traces"] = traces;
    return j;
  }

  /// key = value lines accepted by --config.
  [[nodiscard]] std::string config_text() const {
    std::ostringstream os;
    const json doc = echo();
    for (const auto& [key, value] : doc.items()) {
      if (key == "command") continue;
      if (value.is_array()) {
        if (value.empty()) continue;
        os << key << " = [";
        for (std::size_t i = 0; i < value.size(); ++i) os << (i ? ", " : "") << value[i].dump();
        os << "]\n";
      } else {
        os << key << " = " << value.dump() << "\n";
      }
    }
    return os.str();
  }

  [[nodiscard]] OptimizerConfig optimizer() const {
    OptimizerConfig c;
    c.restarts = restarts;
    c.tol = tol;
    c.seed = seed;
    c.workers = workers;
    return c;
  }
};

struct Emitted {
  json result;
  std::string csv;  // empty when the result has no flat form
  int exit_code = kExitOk;
};

std::string csv_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class Arg>
json optimizer_json(const OptResult<Arg>& r, bool traces) {
  json j = to_json_value(r);
  if (!traces) {
    json summary = json::array();
    for (const auto& t : r.traces) summary.push_back({{"iterations", t.values.size() - 1}, {"final", t.values.back()}, {"converged", t.converged}});
    j["traces"] = summary;
  }
  return j;
}

void require_n(int n, int lo, int hi, const char* what) {
  if (n < lo || n > hi) throw UsageError(std::string(what) + ": --n must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

Settings load_settings(const RunConfig& cfg, int n) {
  if (cfg.settings.empty()) throw UsageError("--settings FILE (or 'ghz-optimal') is required");
  if (cfg.settings == "ghz-optimal") return ghz_optimal_settings(n);
  auto st = settings_from(read_json_file(cfg.settings));
  if (st.n() != n) throw UsageError("settings describe " + std::to_string(st.n()) + " qubits, state has " + std::to_string(n));
  return st;
}

AnyState load_state(const RunConfig& cfg) {
  if (cfg.state.empty()) throw UsageError("--state is required");
  return state_spec(cfg.state);
}

int state_n(const AnyState& s) {
  return std::visit([](const auto& x) { return x.n(); }, s);
}

MeasurementBasis uniform_bases(const std::string& label, int n) {
  switch (parse_basis(label)) {
    case Basis::z: return MeasurementBasis::computational(n);
    case Basis::x: return MeasurementBasis::x_basis(n);
    case Basis::y: return MeasurementBasis::uniform(n, Vec3::UnitY());
  }
  throw UsageError("unknown basis");
}

// ---------------------------------------------------------------------------
// Commands

Emitted cmd_bellmax(const RunConfig& cfg) {
  require_n(cfg.n, 2, 10, "bellmax");
  const auto r = max_eigen_settings(cfg.n, cfg.optimizer());
  const double expected = quantum_max(cfg.n);
  const double deviation = r.best_value - expected;
  Emitted e;
  e.result = {{"best", r.best_value},
              {"expected", expected},
              {"deviation", deviation},
              {"settings", to_json_value(r.argmax)},
              {"optimizer", optimizer_json(r, cfg.traces)}};
  e.exit_code = std::abs(deviation) < 1e-6 ? kExitOk : kExitProperty;
  return e;
}

Emitted cmd_certify(const RunConfig& cfg) {
  Emitted e;
  if (cfg.estimate) {
    const auto state = load_state(cfg);
    const int n = state_n(state);
    require_n(n, 2, 10, "certify");
    const auto st = load_settings(cfg, n);
    if (cfg.shots < kMinShots) throw UsageError("--shots must be at least 100");
    const auto est = std::visit([&](const auto& s) { return estimate_E(s, st, cfg.shots, cfg.seed, cfg.workers); }, state);
    const auto cert = certify_estimate(est, n);
    e.result = {{"estimate", to_json_value(est)}, {"certificate", to_json_value(cert)}};
  } else {
    require_n(cfg.n, 2, 14, "certify");
    if (cfg.E < 0) throw UsageError("certify: --E must be given and non-negative");
    e.result = to_json_value(certify_depth(cfg.E, cfg.n));
  }
  return e;
}

Emitted cmd_criteria(const RunConfig& cfg) {
  Emitted e;
  if (cfg.which == "distribute") {
    require_n(cfg.n, 2, 10, "criteria distribute");
    if (cfg.k < 1 || cfg.k >= cfg.n) throw UsageError("criteria distribute: need 1 <= --k < --n");
    const auto r = distribute_check(cfg.n, cfg.k, cfg.trials, cfg.seed, cfg.workers);
    e.result = to_json_value(r);
    e.exit_code = r.pass ? kExitOk : kExitProperty;
    return e;
  }
  if (cfg.which == "mm") {
    if (cfg.state.empty()) throw UsageError("--state is required");
    const auto s = symstate_spec(cfg.state);
    if (!s) throw UsageError("criteria mm needs a symmetric state (coeff document or named spec)");
    if (s->n < 2) throw UsageError("criteria mm needs n >= 2");
    const auto r = mm_partial_residual(*s);
    e.result = to_json_value(r);
    e.csv = "index,observed,target\n";
    for (std::size_t i = 0; i < r.observed.size(); ++i)
      e.csv += std::to_string(i) + "," + csv_number(r.observed[i]) + "," + csv_number(r.target[i]) + "\n";
    return e;
  }
  const auto state = load_state(cfg);
  if (cfg.which == "fragility") {
    const auto* psi = std::get_if<PureState>(&state);
    if (!psi) throw UsageError("criteria fragility needs a pure state");
    const auto r = fragility(*psi);
    e.result = to_json_value(r);
    e.result["n"] = psi->n();
    return e;
  }
  if (cfg.which == "mutinfo") {
    const int n = state_n(state);
    const auto bases = uniform_bases(cfg.bases, n);
    const double bits = std::visit([&](const auto& s) { return mutual_information(s, bases); }, state);
    e.result = {{"n", n}, {"bases", cfg.bases}, {"bits", bits}};
    return e;
  }
  throw UsageError("--which must be one of fragility, mutinfo, mm, distribute");
}

Emitted cmd_basis(const RunConfig& cfg) {
  if (cfg.from != "z") throw UsageError("basis: only --from z is supported");
  const Basis target = parse_basis(cfg.to);
  if (target == Basis::z) throw UsageError("basis: --to must be x or y");
  const std::string spec = cfg.state.empty() ? "ghz:" + std::to_string(cfg.n) : cfg.state;
  const auto s = exact_symstate_spec(spec);
  if (!s) throw UsageError("basis: needs an exact symmetric state (ghz:N, ghz-:N, dicke:J:N, zero:N or an exact coeff document)");
  if (s->n > 8) throw UsageError("basis: n must be at most 8");
  const auto change = change_basis(*s, target);
  Emitted e;
  e.result = {{"input", to_json_value(*s)}, {"output", to_json_value(change)}};
  e.csv = "l,re,im\n";
  for (std::size_t l = 0; l < change.state.coeff.size(); ++l)
    e.csv += std::to_string(l) + "," + to_string(change.state.coeff[l].re) + "," + to_string(change.state.coeff[l].im) + "\n";
  return e;
}

Emitted cmd_bellbasis(const RunConfig& cfg) {
  require_n(cfg.n, 2, 10, "bellbasis");
  const auto basis = bell_basis(cfg.n);
  Matrix cols(static_cast<Eigen::Index>(dimension(cfg.n)), static_cast<Eigen::Index>(basis.size()));
  json states = json::array();
  Emitted e;
  e.csv = "bits,sign\n";
  for (std::size_t i = 0; i < basis.size(); ++i) {
    cols.col(static_cast<Eigen::Index>(i)) = basis[i].to_pure().amplitudes();
    std::string bits;
    for (int q = 0; q < cfg.n; ++q) bits += (basis[i].bits >> bit_of(cfg.n, q)) & 1U ? '1' : '0';
    states.push_back({{"bits", bits}, {"sign", basis[i].sign}});
    e.csv += bits + "," + std::to_string(basis[i].sign) + "\n";
  }
  const Matrix gram = cols.adjoint() * cols;
  const double deviation = (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  e.result = {{"n", cfg.n}, {"count", basis.size()}, {"gram_deviation", deviation}, {"states", states}};
  e.exit_code = deviation <= 1e-12 && basis.size() == dimension(cfg.n) ? kExitOk : kExitProperty;
  return e;
}

Emitted cmd_thresholds(const RunConfig& cfg) {
  require_n(cfg.n, 2, 14, "thresholds");
  const auto t = thresholds(cfg.n);
  Emitted e;
  e.result = {{"n", cfg.n}, {"thresholds", t}};
  e.csv = "k,bound\n";
  for (std::size_t k = 0; k < t.size(); ++k) e.csv += std::to_string(k) + "," + csv_number(t[k]) + "\n";
  return e;
}

Emitted cmd_lhv(const RunConfig& cfg) {
  require_n(cfg.n, 1, kMaxLhvQubits, "lhv");
  const Rational m = lhv_max(cfg.n, cfg.workers);
  Emitted e;
  e.result = {{"n", cfg.n}, {"lhv_max", to_string(m)}};
  e.exit_code = m == Rational(2) ? kExitOk : kExitProperty;
  return e;
}

Emitted cmd_product_bound(const RunConfig& cfg) {
  require_n(cfg.n, 2, 8, "product-bound");
  if (cfg.m < 1 || cfg.m >= cfg.n) throw UsageError("product-bound: need 1 <= --m < --n");
  auto oc = cfg.optimizer();
  oc.max_iterations = 2000;
  const auto r = product_bound_max(cfg.n, cfg.m, oc);
  const double bound = std::pow(2.0, (cfg.n - cfg.m + 1) / 2.0);
  Emitted e;
  e.result = {{"n", cfg.n}, {"m", cfg.m}, {"best", r.best_value}, {"bound", bound}, {"deviation", r.best_value - bound},
              {"optimizer", optimizer_json(r, cfg.traces)}};
  e.exit_code = r.best_value <= bound + 1e-8 ? kExitOk : kExitProperty;
  return e;
}

Emitted cmd_search_mm(const RunConfig& cfg) {
  require_n(cfg.n, 2, 8, "search-mm");
  const auto r = search_mm_partial(cfg.n, cfg.optimizer());
  Emitted e;
  e.result = {{"n", cfg.n}, {"best_residual", r.best_value}, {"optimizer", optimizer_json(r, cfg.traces)}};
  return e;
}

Emitted cmd_rho3(const RunConfig& cfg) {
  const auto r = example_rho3(cfg.optimizer());
  Emitted e;
  e.result = to_json_value(r);
  e.result["maximum"] = optimizer_json(r.maximum, cfg.traces);
  e.exit_code = r.maximum.best_value <= 4.0 + 1e-8 ? kExitOk : kExitProperty;
  return e;
}

int cmd_verify(const RunConfig& cfg) {
  int failed = 0;
  json rows = json::array();
  for (const auto& c : verify::criteria()) {
    if (!cfg.only.empty() && std::find(cfg.only.begin(), cfg.only.end(), c.number) == cfg.only.end()) continue;
    const auto r = verify::run(c, cfg.workers);
    if (!r.pass) ++failed;
    if (cfg.format == "json")
      rows.push_back({{"criterion", r.number}, {"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}});
    else
      std::cout << verify::format_line(r) << std::endl;
  }
  if (cfg.format == "json") {
    const json doc = {{"config", cfg.echo()}, {"criteria", rows}, {"failed", failed}};
    if (cfg.out.empty()) {
      std::cout << doc.dump(2) << "\n";
    } else {
      std::ofstream(cfg.out) << doc.dump(2) << "\n";
    }
  }
  return failed == 0 ? kExitOk : kExitProperty;
}

void write_output(const RunConfig& cfg, const Emitted& e) {
  std::string text;
  if (cfg.format == "csv") {
    if (e.csv.empty()) throw UsageError("--format csv is only available for flat tables (thresholds, basis, bellbasis, criteria mm)");
    text = e.csv;
  } else {
    text = json{{"config", cfg.echo()}, {"result", e.result}}.dump(2) + "\n";
  }
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(cfg.out);
    if (!f) throw UsageError("cannot write '" + cfg.out + "'");
    f << text;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bell-Klyshko inequalities and maximal-entanglement criteria"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key = value file; command-line flags take precedence");

  RunConfig cfg;
  std::string dump_config;
  app.add_option("--n", cfg.n, "number of qubits")->capture_default_str();
  app.add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  app.add_option("--restarts", cfg.restarts, "optimizer restarts")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--tol", cfg.tol, "optimizer stopping tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--shots", cfg.shots, "shots per correlator term")->capture_default_str();
  app.add_option("--state", cfg.state, "state file or spec: ghz:N ghz-:N dicke:J:N zero:N sme:N,I");
  app.add_option("--settings", cfg.settings, "settings file, or ghz-optimal");
  app.add_option("--out", cfg.out, "write output here instead of stdout");
  app.add_option("--format", cfg.format, "json or csv")->capture_default_str()->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--workers", cfg.workers, "worker threads (results do not depend on it)")->capture_default_str();
  app.add_option("--dump-config", dump_config, "also write the resolved configuration as a --config file");
  app.add_option("--E", cfg.E, "measured Bell-Klyshko value (certify)");
  app.add_flag("--estimate", cfg.estimate, "certify from simulated measurements of --state with --settings");
  app.add_option("--which", cfg.which, "criteria: fragility, mutinfo, mm or distribute")->capture_default_str();
  app.add_option("--bases", cfg.bases, "measurement basis for mutinfo: z, x or y")->capture_default_str();
  app.add_option("--from", cfg.from, "basis: source basis")->capture_default_str();
  app.add_option("--to", cfg.to, "basis: target basis, x or y")->capture_default_str();
  app.add_option("--m", cfg.m, "product-bound: number of independent qubits")->capture_default_str();
  app.add_option("--k", cfg.k, "distribute: number of measured qubits")->capture_default_str();
  app.add_option("--trials", cfg.trials, "distribute: number of trials")->capture_default_str();
  app.add_option("--only", cfg.only, "verify: run only these criterion numbers");
  app.add_flag("--traces", cfg.traces, "include full per-restart traces");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"bellmax", "maximize the largest eigenvalue of B_n over settings"},
      {"certify", "entanglement depth from E, or from a simulated experiment with --estimate"},
      {"criteria", "maximal-entanglement criteria report for a state"},
      {"basis", "exact change of a symmetric state from the z basis to x or y"},
      {"bellbasis", "the 2^n GHZ-type orthonormal basis"},
      {"thresholds", "threshold ladder 2^{(n-k+1)/2}"},
      {"lhv", "exhaustive local-hidden-variable maximum of F_n"},
      {"product-bound", "maximize <B_n> over states with m independent qubits"},
      {"search-mm", "search symmetric states with maximally mixed partial states"},
      {"rho3", "three-qubit worked example"},
      {"verify", "run the acceptance suite"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->callback([&cfg, name = name] { cfg.command = name; });
  }
  app.get_subcommand("verify")->alias("verify-paper");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (!dump_config.empty()) {
      std::ofstream f(dump_config);
      if (!f) throw UsageError("cannot write '" + dump_config + "'");
      f << cfg.config_text();
    }
    if (cfg.command == "verify") return cmd_verify(cfg);
    Emitted e;
    if (cfg.command == "bellmax") e = cmd_bellmax(cfg);
    else if (cfg.command == "certify") e = cmd_certify(cfg);
    else if (cfg.command == "criteria") e = cmd_criteria(cfg);
    else if (cfg.command == "basis") e = cmd_basis(cfg);
    else if (cfg.command == "bellbasis") e = cmd_bellbasis(cfg);
    else if (cfg.command == "thresholds") e = cmd_thresholds(cfg);
    else if (cfg.command == "lhv") e = cmd_lhv(cfg);
    else if (cfg.command == "product-bound") e = cmd_product_bound(cfg);
    else if (cfg.command == "search-mm") e = cmd_search_mm(cfg);
    else if (cfg.command == "rho3") e = cmd_rho3(cfg);
    write_output(cfg, e);
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
