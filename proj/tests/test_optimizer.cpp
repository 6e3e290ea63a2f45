#include <gtest/gtest.h>

#include <sstream>

#include "delocal/measures.hpp"
#include "delocal/optimizer.hpp"
#include "oracles.hpp"

using namespace delocal;

namespace {

OptimizerConfig small_config(int restarts = 8, std::uint64_t seed = 0) {
  OptimizerConfig cfg;
  cfg.restarts = restarts;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST(ParamToUnitary, Examples) {
  EXPECT_LT(oracle::max_abs(param_to_unitary({0.0, {1, 0, 0, 0}}) - oracle::id(2)), 1e-15);
  EXPECT_LT(oracle::max_abs(param_to_unitary({0.0, {0, 1, 0, 0}}) - Complex(0, 1) * oracle::x()), 1e-15);
  Rng rng = derived_stream(51, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix u = param_to_unitary(random_unitary_params(rng));
    EXPECT_LT(oracle::max_abs(u.adjoint() * u - oracle::id(2)), 1e-12);
  }
}

TEST(ParamToUnitary, NormalizesAxisAndRejectsZero) {
  const ComplexMatrix u = param_to_unitary({0.0, {2, 0, 0, 0}});
  EXPECT_LT(oracle::max_abs(u - oracle::id(2)), 1e-15);
  EXPECT_THROW(param_to_unitary({0.0, {0, 0, 0, 0}}), ValidationError);
}

TEST(Chart, RoundTrip) {
  Rng rng = derived_stream(52, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const UnitaryParams p = random_unitary_params(rng);
    const std::array<double, 4> c = chart_from_unitary_params(p);
    EXPECT_LT(oracle::max_abs(param_to_unitary(unitary_params_from_chart(c)) - param_to_unitary(p)), 1e-12);
  }
}

TEST(Generator, UnitaryAndIdentityAtZero) {
  std::vector<double> zero(16, 0.0);
  EXPECT_LT(oracle::max_abs(unitary_from_generator(zero, 4) - oracle::id(4)), 1e-14);
  Rng rng = derived_stream(53, 0);
  std::vector<double> c(16);
  for (double& v : c) v = standard_normal(rng);
  const ComplexMatrix u = unitary_from_generator(c, 4);
  EXPECT_LT(oracle::max_abs(u.adjoint() * u - oracle::id(4)), 1e-12);
}

TEST(NelderMead, FindsQuadraticMaximum) {
  const Objective f = [](std::span<const double> x) { return -(x[0] - 1) * (x[0] - 1) - 2 * (x[1] + 0.5) * (x[1] + 0.5); };
  const SimplexRun run = nelder_mead_maximize(f, {0.0, 0.0}, 0.5, 2000, 1e-12);
  EXPECT_NEAR(run.best_point[0], 1.0, 1e-5);
  EXPECT_NEAR(run.best_point[1], -0.5, 1e-5);
  EXPECT_TRUE(run.converged);
}

TEST(OptimizerConfig, ValidationNamesField) {
  OptimizerConfig cfg;
  cfg.restarts = 0;
  try {
    cfg.validate();
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "restarts");
  }
  cfg = OptimizerConfig{};
  cfg.dimension = 3;
  EXPECT_THROW(cfg.validate(), ValidationError);
}

TEST(Optimize, Examples) {
  EXPECT_NEAR(optimize(DensityMatrix(bell_state(Bell::PhiPlus)), GameSpec::pnp(), small_config()).best_value, 1.0, 1e-6);
  EXPECT_NEAR(optimize(DensityMatrix(schmidt_state(0.2)), GameSpec::bd(), small_config()).best_value, 0.9, 1e-4);
  EXPECT_NEAR(optimize(werner_state(Bell::PsiPlus, 0.6), GameSpec::pnp(), small_config()).best_value, 0.8, 1e-4);
}

TEST(Optimize, ResultIsConsistent) {
  const DensityMatrix rho = werner_state(Bell::PsiPlus, 0.6);
  const OptimizationResult r = optimize(rho, GameSpec::pnp(), small_config());
  EXPECT_EQ(r.restart_values.size(), 8u);
  EXPECT_EQ(r.best_value, *std::max_element(r.restart_values.begin(), r.restart_values.end()));
  EXPECT_NEAR(pnp_win(rho, r.best_tactic).win_probability, r.best_value, 1e-9);
  EXPECT_GT(r.evaluations, 0);
}

TEST(Optimize, Deterministic) {
  Rng rng = derived_stream(54, 0);
  const DensityMatrix rho = random_density({2, 2}, rng);
  const OptimizationResult a = optimize(rho, GameSpec::bd(), small_config(6, 9));
  const OptimizationResult b = optimize(rho, GameSpec::bd(), small_config(6, 9));
  EXPECT_EQ(a.best_value, b.best_value);
  EXPECT_EQ(a.restart_values, b.restart_values);
  EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(Optimize, RestartMonotonicity) {
  Rng rng = derived_stream(55, 0);
  const DensityMatrix rho = random_density({2, 2}, rng);
  double previous = -1.0;
  for (int restarts : {1, 2, 4, 8}) {
    const double v = optimize(rho, GameSpec::pnp(), small_config(restarts, 3)).best_value;
    EXPECT_GE(v, previous);
    previous = v;
  }
}

TEST(Optimize, PureStateAgreement) {
  Rng rng = derived_stream(56, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const PureState psi = random_pure({2, 2}, rng);
    const double c = concurrence_pure(psi);
    const DensityMatrix rho(psi);
    const double dp = optimize(rho, GameSpec::pnp(), small_config(8, trial)).best_value - (0.75 + c / 4);
    const double db = optimize(rho, GameSpec::bd(), small_config(8, trial)).best_value - (0.5 + c / 2);
    EXPECT_GE(dp, -1e-4);
    EXPECT_LE(dp, 1e-6);
    EXPECT_GE(db, -1e-4);
    EXPECT_LE(db, 1e-6);
  }
}

TEST(Optimize, BoundsHoldForEveryCandidate) {
  // Every restart value is some candidate's value; none may pass the bounds.
  Rng rng = derived_stream(57, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const DensityMatrix rho = random_density({2, 2}, rng);
    const double c = concurrence_mixed(rho);
    for (double v : optimize(rho, GameSpec::pnp(), small_config(8, trial)).restart_values) {
      EXPECT_LE(v, 0.75 + c / 4 + 1e-6);
      EXPECT_LE(v, record_bound(rho) + 1e-6);
    }
    for (double v : optimize(rho, GameSpec::bd(), small_config(8, trial)).restart_values) EXPECT_LE(v, 0.5 + c / 2 + 1e-6);
  }
  const DensityMatrix sep = random_separable(rng);
  for (double v : optimize(sep, GameSpec::bd(), small_config()).restart_values) EXPECT_LE(v, 0.5 + 1e-6);
  for (double v : optimize(sep, GameSpec::pnp(), small_config()).restart_values) EXPECT_LE(v, 0.75 + 1e-6);
}

TEST(EmbedWithAncilla, LayoutAndSpectrum) {
  const DensityMatrix rho = werner_state(Bell::PsiPlus, 0.6);
  const DensityMatrix big = embed_with_ancilla(rho);
  EXPECT_EQ(big.dims(), (Dims{4, 4}));
  // (A A' | B B') with primed qubits in |0>: entry (a0 b0, a'0 b'0) indices.
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const int bi = (i >> 1) * 8 + (i & 1) * 2, bj = (j >> 1) * 8 + (j & 1) * 2;
      EXPECT_EQ(big.matrix()(bi, bj), rho.matrix()(i, j));
    }
}

TEST(Optimize, AncillaPointOnWernerCurve) {
  OptimizerConfig cfg = small_config(8);
  cfg.dimension = 4;
  EXPECT_NEAR(optimize(werner_state(Bell::PsiPlus, 0.8), GameSpec::pnp(), cfg).best_value, 0.9, 2e-3);
}

TEST(OptimizeSeparable, Examples) {
  const OptimizerConfig cfg = small_config(16);
  EXPECT_NEAR(optimize_separable(GameSpec::pnp(0.5), cfg).best_value, 0.75, 1e-4);
  EXPECT_NEAR(optimize_separable(GameSpec::pnp(0.6), cfg).best_value, 0.7, 1e-4);
  const OptimizationResult bd = optimize_separable(GameSpec::bd(), cfg);
  EXPECT_NEAR(bd.best_value, 0.5, 1e-4);
  ASSERT_TRUE(bd.best_state.has_value());
  EXPECT_NEAR(concurrence_pure(*bd.best_state), 0.0, 1e-12);
}

TEST(Sweep, GridAndCsv) {
  EXPECT_EQ(grid_intervals(0.01), 100);
  EXPECT_EQ(grid_intervals(0.05), 20);
  EXPECT_THROW(grid_intervals(0.03), ValidationError);
  EXPECT_THROW(grid_intervals(0.0), ValidationError);
  const std::vector<SweepRow> rows = werner_sweep(SweepKind::Bare, 0.25, small_config(4));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_NEAR(rows[0].p_opt, 0.5, 1e-6);
  for (const SweepRow& r : rows) {
    EXPECT_NEAR(r.record_bound, 0.5 * (1 + r.a), 1e-12);
    EXPECT_LE(r.p_opt, r.record_bound + 1e-8);
  }
  std::ostringstream a, b;
  write_sweep_csv(a, rows);
  write_sweep_csv(b, werner_sweep(SweepKind::Bare, 0.25, small_config(4)));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "a,p_opt,record_bound,concurrence_bound");
}
