#include "delocal/optimizer.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "delocal/measures.hpp"

namespace delocal {

namespace {

std::vector<double> random_chart_pair(Rng& rng) {
  std::vector<double> x;
  for (int side = 0; side < 2; ++side) {
    const auto chart = chart_from_unitary_params(random_unitary_params(rng));
    x.insert(x.end(), chart.begin(), chart.end());
  }
  return x;
}

std::vector<double> random_generator_pair(Rng& rng) {
  std::vector<double> x(2 * generator_size(4));
  for (double& v : x) v = standard_normal(rng);
  return x;
}

ComplexMatrix local_unitary(std::span<const double> x, int local_dim) {
  if (local_dim == 2) return param_to_unitary(unitary_params_from_chart(x));
  return unitary_from_generator(x, local_dim);
}

std::size_t side_size(int local_dim) { return local_dim == 2 ? 4 : static_cast<std::size_t>(generator_size(4)); }

PureState product_from_angles(std::span<const double> x) {
  auto qubit = [](double theta, double phi) {
    ComplexVector v(2);
    v << std::cos(0.5 * theta), std::polar(1.0, phi) * std::sin(0.5 * theta);
    return v;
  };
  const ComplexVector a = qubit(x[0], x[1]), b = qubit(x[2], x[3]);
  ComplexVector v(4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) v[2 * i + j] = a[i] * b[j];
  v /= v.norm();
  return PureState({2, 2}, v);
}

}  // namespace

DensityMatrix embed_with_ancilla(const DensityMatrix& rho) {
  if (rho.dims() != Dims{2, 2}) throw DimensionError("embed_with_ancilla: expected a two-qubit state");
  const DensityMatrix full = tensor(rho, DensityMatrix(basis_state("00")));
  const int order[4] = {0, 2, 1, 3};
  const ComplexMatrix m = permute_subsystems(full.matrix(), {2, 2, 2, 2}, order);
  return DensityMatrix({4, 4}, m);
}

Tactic tactic_from_point(std::span<const double> x, int local_dim, const std::string& label) {
  const std::size_t n = side_size(local_dim);
  if (x.size() != 2 * n) throw DimensionError("tactic_from_point: wrong parameter count");
  return Tactic(local_unitary(x.subspan(0, n), local_dim), local_unitary(x.subspan(n, n), local_dim), label);
}

OptimizationResult optimize(const DensityMatrix& rho, const GameSpec& game, const OptimizerConfig& cfg) {
  cfg.validate();
  const int d = cfg.dimension;
  DensityMatrix resource = rho;
  if (d == 4 && rho.dims() == Dims{2, 2}) resource = embed_with_ancilla(rho);
  if (resource.dims() != Dims{d, d})
    throw DimensionError(fmt::format("optimize: resource dims do not match local dimension {}", d));

  const WinEvaluator eval(resource, game);
  const std::size_t n = side_size(d);
  auto f = [&](std::span<const double> x) {
    return eval(local_unitary(x.subspan(0, n), d), local_unitary(x.subspan(n, n), d));
  };
  const MultiStartRun run =
      d == 2 ? multistart_maximize(f, random_chart_pair, cfg, 0.4) : multistart_maximize(f, random_generator_pair, cfg, 0.5);
  return {run.best_value, tactic_from_point(run.best_point, d, "optimized"), run.restart_values, run.evaluations,
          std::nullopt};
}

OptimizationResult optimize_separable(const GameSpec& game, const OptimizerConfig& cfg) {
  cfg.validate();
  auto f = [&](std::span<const double> x) {
    const WinEvaluator eval(product_from_angles(x.subspan(0, 4)), game);
    return eval(local_unitary(x.subspan(4, 4), 2), local_unitary(x.subspan(8, 4), 2));
  };
  auto sampler = [](Rng& rng) {
    std::vector<double> x;
    for (int side = 0; side < 2; ++side) {
      x.push_back(std::acos(1.0 - 2.0 * uniform01(rng)));
      x.push_back(2.0 * std::numbers::pi * uniform01(rng));
    }
    const std::vector<double> t = random_chart_pair(rng);
    x.insert(x.end(), t.begin(), t.end());
    return x;
  };
  const MultiStartRun run = multistart_maximize(f, sampler, cfg, 0.4);
  const std::span<const double> best(run.best_point);
  return {run.best_value, tactic_from_point(best.subspan(4, 8), 2, "optimized"), run.restart_values,
          run.evaluations, product_from_angles(best.subspan(0, 4))};
}

int grid_intervals(double step) {
  if (!(step > 0.0 && step <= 1.0)) throw ValidationError("step", "must lie in (0, 1]");
  const double n = std::round(1.0 / step);
  if (std::abs(n * step - 1.0) > 1e-9) throw ValidationError("step", fmt::format("{} does not divide [0, 1]", step));
  return static_cast<int>(n);
}

std::vector<SweepRow> werner_sweep(SweepKind kind, double step, const OptimizerConfig& cfg) {
  const int n = grid_intervals(step);
  const GameSpec game = GameSpec::pnp(0.5);
  std::vector<SweepRow> rows;
  for (int i = 0; i <= n; ++i) {
    const double a = static_cast<double>(i) / n;
    const DensityMatrix rho = werner_state(Bell::PsiPlus, a);
    OptimizerConfig point = cfg;
    point.dimension = kind == SweepKind::Bare ? 2 : 4;
    point.seed = derived_stream(cfg.seed, 0x100000u + static_cast<std::uint64_t>(i))();
    const OptimizationResult r = optimize(rho, game, point);
    rows.push_back({a, r.best_value, record_bound(rho), 0.75 + 0.25 * concurrence_mixed(rho)});
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "a,p_opt,record_bound,concurrence_bound\n";
  for (const SweepRow& r : rows)
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", r.a, r.p_opt, r.record_bound, r.concurrence_bound);
}

}  // namespace delocal
