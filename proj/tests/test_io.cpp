#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "klyshko/io.hpp"
#include "oracles.hpp"

using namespace klyshko;

namespace {

std::string write_temp(const std::string& name, const json& doc) {
  const auto path = (std::filesystem::temp_directory_path() / name).string();
  std::ofstream(path) << doc.dump();
  return path;
}

}  // namespace

TEST(Io, PureRoundTrip) {
  Rng rng(derive_seed(kDefaultSeed, 41));
  const auto s = oracle::random_state(3, rng);
  const auto back = pure_from(to_json_value(s));
  EXPECT_LT((back.amplitudes() - s.amplitudes()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Io, DensityRoundTrip) {
  Rng rng(derive_seed(kDefaultSeed, 42));
  const auto rho = oracle::random_density(2, rng);
  const auto back = density_from(to_json_value(rho));
  EXPECT_LT((back.matrix() - rho.matrix()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Io, ExactSymStateRoundTrip) {
  const SymState s{3, {ComplexRational(Rational(1, 3)), ComplexRational(Rational(0), Rational(-2)), ComplexRational(), ComplexRational(Rational(5))}};
  const json j = to_json_value(s);
  EXPECT_TRUE(is_exact_symstate(j));
  const auto back = symstate_from(j);
  EXPECT_EQ(back.coeff, s.coeff);
  EXPECT_EQ(back.basis, Basis::z);
  EXPECT_EQ(symstate_from(to_json_value(ghz_y_form(3))).basis, Basis::y);
}

TEST(Io, NumericSymState) {
  const json j = {{"n", 2}, {"coeff", {1.0, json::array({0.0, 0.5}), -1}}};
  EXPECT_FALSE(is_exact_symstate(j));
  const auto s = numeric_symstate_from(j);
  EXPECT_EQ(s.coeff[1], Complex(0, 0.5));
  const json exact = {{"n", 1}, {"coeff", {"1/2", "-1/2"}}};
  EXPECT_NEAR(numeric_symstate_from(exact).coeff[1].real(), -0.5, 1e-15);
}

TEST(Io, SettingsRoundTrip) {
  const auto st = ghz_optimal_settings(4);
  const auto back = settings_from(to_json_value(st));
  ASSERT_EQ(back.n(), 4);
  for (int q = 0; q < 4; ++q) {
    EXPECT_LT((back.qubits[static_cast<std::size_t>(q)].a - st.qubits[static_cast<std::size_t>(q)].a).norm(), 1e-15);
    EXPECT_LT((back.qubits[static_cast<std::size_t>(q)].a_prime - st.qubits[static_cast<std::size_t>(q)].a_prime).norm(), 1e-15);
  }
}

TEST(Io, MalformedInput) {
  EXPECT_THROW(pure_from(json{{"amp", json::array()}}), FormatError);
  EXPECT_THROW(pure_from(json{{"n", 2}, {"amp", {1, 0, 0}}}), FormatError);
  EXPECT_THROW(pure_from(json{{"n", 0}, {"amp", {1}}}), FormatError);
  EXPECT_THROW(pure_from(json{{"n", 1}, {"amp", {"x", 0}}}), FormatError);
  EXPECT_THROW(density_from(json{{"n", 1}, {"rho", {{1, 0}, {0}}}}), FormatError);
  EXPECT_THROW(symstate_from(json{{"n", 1}, {"coeff", {"1", 2}}}), FormatError);
  EXPECT_THROW(symstate_from(json{{"n", 2}, {"coeff", {"1", "1"}}}), FormatError);
  EXPECT_THROW(settings_from(json::array()), FormatError);
  EXPECT_THROW(settings_from(json::array({{{"a", {1, 0, 0}}}})), FormatError);
  EXPECT_THROW(settings_from(json::array({{{"a", {1, 1, 0}}, {"a_prime", {1, 0, 0}}}})), FormatError);
  EXPECT_THROW(any_state_from(json{{"n", 1}}), FormatError);
  EXPECT_THROW(any_state_from(json::array()), FormatError);
}

TEST(Io, UnreadableFiles) {
  EXPECT_THROW(read_json_file("/nonexistent/state.json"), std::runtime_error);
  const auto path = (std::filesystem::temp_directory_path() / "klyshko_bad.json").string();
  std::ofstream(path) << "{not json";
  EXPECT_THROW(read_json_file(path), FormatError);
  std::remove(path.c_str());
}

TEST(Io, StateSpecs) {
  const auto g = exact_symstate_spec("ghz:3");
  ASSERT_TRUE(g.has_value());
  EXPECT_EQ(g->coeff, ghz(3).coeff);
  EXPECT_EQ(exact_symstate_spec("ghz-:4")->coeff, ghz(4, -1).coeff);
  EXPECT_EQ(exact_symstate_spec("dicke:1:3")->coeff, dicke(1, 3).coeff);
  EXPECT_EQ(exact_symstate_spec("zero:2")->coeff, dicke(0, 2).coeff);
  EXPECT_FALSE(exact_symstate_spec("sme:6,2").has_value());
  EXPECT_EQ(symstate_spec("sme:6,2")->n, 6);
  EXPECT_THROW(exact_symstate_spec("ghz:x"), FormatError);
  EXPECT_THROW(state_spec("sme:9,9"), std::invalid_argument);

  const auto s = std::get<PureState>(state_spec("ghz:2"));
  EXPECT_NEAR(std::abs(s[0]), 1 / std::sqrt(2.0), 1e-15);
}

TEST(Io, StateSpecFiles) {
  const auto dense = write_temp("klyshko_dense.json", {{"n", 1}, {"rho", {{0.5, 0}, {0, 0.5}}}});
  EXPECT_TRUE(std::holds_alternative<DensityMatrix>(state_spec(dense)));
  const auto exact = write_temp("klyshko_exact.json", {{"n", 2}, {"coeff", {"1", "0", "-1"}}});
  EXPECT_EQ(exact_symstate_spec(exact)->coeff, ghz(2, -1).coeff);
  const auto pure = write_temp("klyshko_pure.json", {{"n", 1}, {"amp", {0, 1}}});
  EXPECT_TRUE(std::holds_alternative<PureState>(state_spec(pure)));
  EXPECT_FALSE(symstate_spec(pure).has_value());
  for (const auto& p : {dense, exact, pure}) std::remove(p.c_str());
}

TEST(Io, ReportShapes) {
  const auto c = to_json_value(certify_depth(4.5, 3));
  EXPECT_EQ(c["certified_entangled"], 3);
  EXPECT_EQ(c["flags"][0], "exceeds quantum bound");
  OptimizerConfig cfg;
  cfg.restarts = 2;
  const auto r = to_json_value(search_mm_partial(2, cfg));
  EXPECT_TRUE(r.contains("best_min"));
  EXPECT_EQ(r["traces"].size(), 2U);
  const auto b = to_json_value(z_to_x(ghz(2)));
  EXPECT_EQ(b["scale"][0], "4");
  EXPECT_EQ(b["state"]["basis"], "x");
}
