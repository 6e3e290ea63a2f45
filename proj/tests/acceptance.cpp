// One PASS/FAIL line per acceptance criterion. A criterion passes only when
// its check holds and it finishes inside its time budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "delocal/circuits.hpp"
#include "delocal/inequalities.hpp"
#include "delocal/measures.hpp"
#include "delocal/optimizer.hpp"
#include "delocal/tactics.hpp"
#include "oracles.hpp"

using namespace delocal;

namespace {

struct Outcome {
  bool ok;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> check;
};

OptimizerConfig config(int restarts, std::uint64_t seed, int dimension = 2) {
  OptimizerConfig cfg;
  cfg.restarts = restarts;
  cfg.seed = seed;
  cfg.dimension = dimension;
  return cfg;
}

std::vector<double> grid(double step) {
  std::vector<double> a;
  const int n = grid_intervals(step);
  for (int i = 0; i <= n; ++i) a.push_back(static_cast<double>(i) / n);
  return a;
}

// Pure-state suite shared by the PNP and BD criteria.
Outcome pure_suite(GameKind kind) {
  Rng rng = derived_stream(1001, kind == GameKind::Pnp ? 0 : 1);
  const GameSpec game = kind == GameKind::Pnp ? GameSpec::pnp() : GameSpec::bd();
  double worst_analytic = 0.0, worst_opt = 0.0;
  for (int i = 0; i < 100; ++i) {
    const PureState psi = random_pure({2, 2}, rng);
    const double c = concurrence_pure(psi);
    const double target = kind == GameKind::Pnp ? 0.75 + c / 4 : 0.5 + c / 2;
    const DensityMatrix rho(psi);
    const double analytic = evaluate(Recipe::OrthogonalSchmidtFlip, rho, game).win_probability;
    const double opt = optimize(rho, game, config(8, static_cast<std::uint64_t>(i))).best_value;
    worst_analytic = std::max(worst_analytic, std::abs(analytic - target));
    worst_opt = std::max(worst_opt, std::abs(opt - target));
  }
  return {worst_analytic < 1e-8 && worst_opt < 1e-4,
          fmt::format("max|analytic-target|={:.2e} (tol 1e-8), max|optimizer-target|={:.2e} (tol 1e-4)", worst_analytic,
                      worst_opt)};
}

Outcome werner_line() {
  double worst_line = 0.0, worst_record = 0.0;
  bool below = true;
  for (double a : grid(0.05)) {
    const DensityMatrix rho = werner_state(Bell::PsiPlus, a);
    const double win = evaluate(Recipe::WernerFlip, rho, GameSpec::pnp()).win_probability;
    worst_line = std::max(worst_line, std::abs(win - 0.5 * (1 + a)));
    worst_record = std::max(worst_record, std::abs(win - record_bound(rho)));
    if (a < 1.0) below = below && win < 0.75 + concurrence_mixed(rho) / 4;
  }
  return {worst_line < 1e-12 && worst_record < 1e-12 && below,
          fmt::format("max|win-(1+a)/2|={:.2e}, max|win-record|={:.2e} (tol 1e-12), below concurrence bound: {}",
                      worst_line, worst_record, below)};
}

Outcome two_bell_saturation() {
  double worst_formula = 0.0, worst_bound = 0.0;
  for (double a : grid(0.05)) {
    const DensityMatrix rho = two_bell_mixture_state(a);
    const double win = evaluate(Recipe::TwoBellMixture, rho, GameSpec::pnp()).win_probability;
    const double formula = a <= 0.5 ? 1 - a / 2 : 0.5 * (1 + a);
    worst_formula = std::max(worst_formula, std::abs(win - formula));
    worst_bound = std::max(worst_bound, std::abs(win - (0.75 + concurrence_mixed(rho) / 4)));
  }
  return {worst_formula < 1e-12 && worst_bound < 1e-12,
          fmt::format("max|win-formula|={:.2e}, max|win-(3/4+C/4)|={:.2e} (tol 1e-12)", worst_formula, worst_bound)};
}

Outcome bell_diagonal_bd() {
  Rng rng = derived_stream(1005, 0);
  double worst = 0.0;
  int n = 0;
  while (n < 50) {
    const std::vector<double> w = dirichlet_ones(4, rng);
    if (*std::max_element(w.begin(), w.end()) <= 0.5) continue;
    ++n;
    const DensityMatrix rho = bell_diagonal_state(w);
    const double win = evaluate(Recipe::Fef, rho, GameSpec::bd()).win_probability;
    const double c = concurrence_mixed(rho), f = fully_entangled_fraction(rho).value;
    worst = std::max({worst, std::abs(win - (0.5 + 0.5 * c)), std::abs(win - f)});
  }
  return {worst < 1e-8, fmt::format("max deviation from 1/2+C/2 and F over 50 states={:.2e} (tol 1e-8)", worst)};
}

Outcome spectral_bound_fuzz() {
  double min_slack = 1.0;
  for (int dim : {2, 4}) {
    for (int i = 0; i < 1000; ++i) {
      Rng rng = derived_stream(1006 + static_cast<std::uint64_t>(dim), static_cast<std::uint64_t>(i));
      min_slack = std::min(min_slack, lemma1_check(random_density({dim}, rng), random_density({dim}, rng)).slack);
    }
  }
  return {min_slack >= -1e-10, fmt::format("min slack over 2x1000 pairs={:.3e} (tol -1e-10)", min_slack)};
}

Outcome violation_threshold() {
  const ViolationScan scan = werner_violation_scan(0.01, config(64, 1007));
  if (!scan.threshold) return {false, "no violation found on the grid"};
  const double t = *scan.threshold;
  return {t >= 0.68 - 1e-12 && t <= 0.72 + 1e-12, fmt::format("a*={:.2f} (window [0.68, 0.72])", t)};
}

Outcome ancilla_sweep() {
  const std::vector<SweepRow> rows = werner_sweep(SweepKind::WithAncilla, 0.05, config(16, 1008, 4));
  double worst = 0.0, worst_a = 0.0;
  for (const SweepRow& r : rows) {
    const double d = std::abs(r.p_opt - std::max(0.75, 0.5 * (1 + r.a)));
    if (d > worst) worst = d, worst_a = r.a;
  }
  return {worst <= 2e-3, fmt::format("max|p_opt-max(3/4,(1+a)/2)|={:.2e} at a={:.2f} (tol 2e-3)", worst, worst_a)};
}

Outcome asymmetric_separable() {
  double worst = 0.0;
  std::string values;
  for (double pp : {0.4, 0.5, 0.6, 2.0 / 3.0, 0.8}) {
    const double best = optimize_separable(GameSpec::pnp(pp), config(32, 1009)).best_value;
    const double want = std::max(pp, (1 - pp) + 0.5 * pp);
    worst = std::max(worst, std::abs(best - want));
    values += fmt::format(" {:.4f}->{:.6f}", pp, best);
  }
  return {worst < 1e-4, fmt::format("max deviation={:.2e} (tol 1e-4);{}", worst, values)};
}

Outcome circuit_crosscheck() {
  const std::vector<double> eq = {0.5, 0.5};
  const DemoReport bd = run_demo(GameKind::Bd, {}, 0, 0, eq);
  const DemoReport pnp = run_demo(GameKind::Pnp, {}, 0, 0, eq);
  const std::vector<double> asym = {2.0 / 3.0, 1.0 / 3.0};
  const DemoReport pnp_asym = run_demo(GameKind::Pnp, {}, 0, 0, asym);
  // Engine predictions for the same resources and tactics.
  const DensityMatrix ent(bell_state(Bell::PhiPlus));
  const Tactic flip(pauli::x(), pauli::x(), "flip");
  const double bd_ent = bd_win(DensityMatrix(bell_state(Bell::PsiPlus)), flip).win_probability;
  const double pnp_ent = pnp_win(ent, flip).win_probability;
  const double pnp_ent_asym = pnp_win(ent, flip, 2.0 / 3.0).win_probability;
  const DensityMatrix sep(basis_state("00"));
  const double bd_sep = bd_win(sep, flip).win_probability;
  auto pnp_sep_formula = [](double pp) { return (1 - pp) + 0.5 * pp; };
  const double pnp_sep = pnp_win(sep, flip).win_probability;
  const double pnp_sep_asym = pnp_win(sep, flip, 2.0 / 3.0).win_probability;
  const double dev = std::max({std::abs(bd.total_entangled - bd_ent), std::abs(pnp.total_entangled - pnp_ent),
                               std::abs(pnp_asym.total_entangled - pnp_ent_asym), std::abs(bd.total_separable - bd_sep),
                               std::abs(pnp.total_separable - pnp_sep_formula(0.5)),
                               std::abs(pnp_asym.total_separable - pnp_sep_formula(2.0 / 3.0)),
                               std::abs(pnp_sep - pnp_sep_formula(0.5)), std::abs(pnp_sep_asym - pnp_sep_formula(2.0 / 3.0)),
                               std::abs(bd_ent - 1.0), std::abs(pnp_ent - 1.0), std::abs(bd_sep - 0.5)});
  const DemoReport noisy = run_demo(GameKind::Bd, NoiseModel::reference(), 0, 0, eq);
  const bool shape = noisy.total_entangled > 0.5 && noisy.total_entangled > noisy.total_separable;
  return {dev < 1e-10 && shape,
          fmt::format("noiseless max deviation from engine={:.2e} (tol 1e-10); reference noise BD entangled={:.4f}, "
                      "separable={:.4f}",
                      dev, noisy.total_entangled, noisy.total_separable)};
}

Outcome property_suites() {
  // C >= E on pure states.
  Rng rng = derived_stream(1011, 0);
  double worst_ce = 1.0;
  for (int i = 0; i < 200; ++i) {
    const PureState psi = random_pure({2, 2}, rng);
    worst_ce = std::min(worst_ce, concurrence_pure(psi) - entanglement_entropy(psi));
  }
  // Helstrom against random measurements.
  Rng hrng = derived_stream(1011, 1);
  const DensityMatrix a = random_density({2, 2}, hrng), b = random_density({2, 2}, hrng);
  const double h = helstrom_win(a.matrix(), b.matrix(), 0.5, 0.5);
  const double brute = oracle::random_measurement_best(a.matrix(), b.matrix(), 0.5, 0.5, 5000, hrng);
  const double helstrom_slack = h - brute;
  // Convexity of the optimized PNP win probability.
  Rng crng = derived_stream(1011, 2);
  double worst_convex = 1.0;
  for (int e = 0; e < 20; ++e) {
    const std::vector<double> r = dirichlet_ones(3, crng);
    ComplexMatrix mix = ComplexMatrix::Zero(4, 4);
    double rhs = 0.0;
    for (int i = 0; i < 3; ++i) {
      const DensityMatrix rho = random_density({2, 2}, crng);
      mix += r[static_cast<std::size_t>(i)] * rho.matrix();
      rhs += r[static_cast<std::size_t>(i)] * optimize(rho, GameSpec::pnp(), config(8, 100 + 3 * e + i)).best_value;
    }
    const double lhs = optimize(DensityMatrix({2, 2}, mix), GameSpec::pnp(), config(8, 200 + e)).best_value;
    worst_convex = std::min(worst_convex, rhs - lhs);
  }
  // SA identity.
  Rng srng = derived_stream(1011, 3);
  double worst_sa = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double p = uniform01(srng);
    const Complex c = std::polar(std::sqrt(p * (1 - p)) * uniform01(srng), 2 * std::acos(-1.0) * uniform01(srng));
    const SaOptimum o = sa_pnp2_optimum(SAState::two_qubit(p, c));
    worst_sa = std::max({worst_sa, std::abs(o.max_trace_distance - o.concurrence), std::abs(o.concurrence - 2 * std::abs(c))});
  }
  const bool ok = worst_ce >= -1e-9 && helstrom_slack >= -1e-6 && worst_convex >= -1e-4 && worst_sa < 1e-12;
  return {ok, fmt::format("min(C-E)={:.2e}; Helstrom-best random={:.2e}; min convexity slack={:.2e} (tol -1e-4); "
                          "SA identity max dev={:.2e}",
                          worst_ce, helstrom_slack, worst_convex, worst_sa)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "PNP pure-state concurrence equality", 30, [] { return pure_suite(GameKind::Pnp); }},
      {2, "BD pure-state concurrence equality", 30, [] { return pure_suite(GameKind::Bd); }},
      {3, "Werner PNP line saturates record bound", 5, werner_line},
      {4, "two-Bell mixture saturates concurrence bound", 5, two_bell_saturation},
      {5, "Bell-diagonal BD saturation with FEF tactic", 20, bell_diagonal_bd},
      {6, "spectral trace-distance bound fuzz", 20, spectral_bound_fuzz},
      {7, "trace-distance violation threshold", 600, violation_threshold},
      {8, "ancilla-extended Werner sweep", 900, ancilla_sweep},
      {9, "asymmetric PNP separable optimum", 300, asymmetric_separable},
      {10, "circuit cross-check", 30, circuit_crosscheck},
      {11, "property suites", 600, property_suites},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.ok && in_time;
    failures += pass ? 0 : 1;
    std::printf("%s [%2d] %s: %s; %.2f s (budget %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), secs, c.budget_s, in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
