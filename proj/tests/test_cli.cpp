#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "delocal/cli.hpp"
#include "delocal/random.hpp"
#include "delocal/state_io.hpp"
#include "oracles.hpp"

using namespace delocal;
using nlohmann::json;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "delocal");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "delocal_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Cli, MeasureWerner) {
  const CliRun r = run({"measure", "--state", "werner:a=0.6"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["concurrence"].get<double>(), 0.4, 1e-12);
  EXPECT_NEAR(j["fef"].get<double>(), 0.7, 1e-12);
  EXPECT_TRUE(j.contains("config"));
  EXPECT_EQ(j["config"]["version"], kVersion);
  EXPECT_TRUE(j["config"].contains("seed"));
}

TEST(Cli, PlayBdFlip) {
  const CliRun r = run({"play", "--game", "bd", "--state", "bell:phi+", "--tactic", "flip"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["report"]["win_probability"].get<double>(), 1.0, 1e-12);
}

TEST(Cli, TacticEmitsMatricesAndPrediction) {
  const CliRun r = run({"tactic", "--name", "werner_flip", "--state", "werner:a=0.6", "--game", "pnp"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["predicted_win"].get<double>(), 0.8, 1e-12);
  EXPECT_TRUE(j["tactic"].contains("u_a"));
}

TEST(Cli, SweepWritesRows) {
  const auto path = scratch("w.csv");
  const CliRun r = run({"sweep", "werner", "--step", "0.25", "--restarts", "2", "--out", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = read_text_file(path.string());
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
}

TEST(Cli, ValidationErrorsExitTwoAndNameField) {
  CliRun r = run({"measure", "--state", "werner:a=1.7"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("a"), std::string::npos);
  r = run({"play", "--game", "chess", "--state", "bell:phi+", "--tactic", "flip"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("game"), std::string::npos);
  r = run({"demo", "--game", "bd", "--p2", "2"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--p2"), std::string::npos);
  r = run({"measure", "--state", "bell:phi+", "--bogus"});
  EXPECT_EQ(r.code, 2);
  r = run({"sweep", "werner", "--step", "0.03", "--out", scratch("x.csv").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("step"), std::string::npos);
}

TEST(Cli, IoErrorExitsThree) {
  const CliRun r = run({"demo", "--game", "bd", "--shots", "16", "--out", "/nonexistent_dir/x/demo.csv"});
  EXPECT_EQ(r.code, 3);
}

TEST(Cli, DemoCsvByteStable) {
  const auto a = scratch("d1.csv"), b = scratch("d2.csv");
  ASSERT_EQ(run({"demo", "--game", "bd", "--seed", "4", "--out", a.string()}).code, 0);
  ASSERT_EQ(run({"demo", "--game", "bd", "--seed", "4", "--out", b.string()}).code, 0);
  EXPECT_EQ(read_text_file(a.string()), read_text_file(b.string()));
  const json j = json::parse(run({"demo", "--game", "bd", "--seed", "4"}).out);
  EXPECT_EQ(j["config"]["seed"], 4);
  EXPECT_NEAR(j["annotations"]["hardware_reference_total"].get<double>(), 0.71, 1e-15);
  EXPECT_NEAR(j["annotations"]["usable_concurrence"].get<double>(), 2 * (j["total_entangled"].get<double>() - 0.5),
              1e-15);
}

TEST(Cli, CheckVerbs) {
  CliRun r = run({"check", "lemma1", "--params", "dim=2,pairs=50"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(json::parse(r.out)["all_hold"].get<bool>());
  r = run({"check", "tdineq", "--state", "werner:a=0.9", "--params", "u=x,v=x"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_FALSE(json::parse(r.out)["holds"].get<bool>());
  r = run({"check", "sa", "--params", "rho00=0.5,rho01=0.3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["concurrence"].get<double>(), 0.6, 1e-12);
  r = run({"check", "conditioned", "--state", "sa:rho00=0.5,rho01=0.3", "--params", "variant=pnp2,u=z,v=z"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["objective"].get<double>(), 0.8, 1e-12);
  r = run({"check", "conditioned", "--state", "werner:a=0.5", "--params", "variant=pnp2,u=x,v=h"});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, StateAndTacticRoundTrip) {
  Rng rng = derived_stream(71, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const DensityMatrix rho = random_density({2, 2}, rng);
    const State back = parse_state_json(state_to_json(rho));
    EXPECT_EQ(oracle::max_abs(as_density(back).matrix() - rho.matrix()), 0.0);
    const PureState psi = random_pure({2, 2}, rng);
    const State pback = parse_state_json(state_to_json(psi));
    EXPECT_EQ((std::get<PureState>(pback).amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff(), 0.0);
    const Tactic t(haar_unitary(2, rng), haar_unitary(2, rng), "t");
    const Tactic tb = parse_tactic_json(tactic_to_json(t));
    EXPECT_EQ(oracle::max_abs(tb.u_a() - t.u_a()), 0.0);
    EXPECT_EQ(oracle::max_abs(tb.v_b() - t.v_b()), 0.0);
  }
}

TEST(Cli, PlayFromFiles) {
  const auto sp = scratch("state.json"), tp = scratch("tactic.json");
  write_text_file(sp.string(), state_to_json(werner_state(Bell::PsiPlus, 0.6)));
  write_text_file(tp.string(), tactic_to_json(Tactic(pauli::x(), pauli::x(), "flip")));
  const CliRun r = run({"play", "--game", "pnp", "--state", sp.string(), "--tactic", tp.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["report"]["win_probability"].get<double>(), 0.8, 1e-12);
}

TEST(Cli, SeedFromEnvironment) {
  ::setenv(kSeedEnv, "42", 1);
  const CliRun r = run({"demo", "--game", "bd", "--shots", "64"});
  ::unsetenv(kSeedEnv);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["config"]["seed"], 42);
}
