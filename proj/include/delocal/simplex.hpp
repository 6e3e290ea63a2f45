// Derivative-free multi-start maximization and unitary parametrizations.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "delocal/qcore.hpp"
#include "delocal/random.hpp"

namespace delocal {

struct OptimizerConfig {
  int restarts = 32;
  int max_iterations = 2000;  // per restart
  double tolerance = 1e-9;    // objective change over a full simplex cycle
  std::uint64_t seed = 0;
  int dimension = 2;          // local unitary dimension: 2, or 4 with a |00> ancilla

  void validate() const;
};

/// U = e^{i phase} (a0 I + i a1 X + i a2 Y + i a3 Z) with |a| = 1.
struct UnitaryParams {
  double phase = 0.0;
  std::array<double, 4> axis{1.0, 0.0, 0.0, 0.0};
};

/// Non-normalized axes are normalized and a warning is written to std::clog.
/// A zero axis throws ValidationError.
ComplexMatrix param_to_unitary(const UnitaryParams& p);

/// Chart used by the optimizer: (phase, theta1, theta2, theta3) with
/// hyperspherical angles for the axis.
UnitaryParams unitary_params_from_chart(std::span<const double> chart);
/// Inverse of the chart for a normalized axis.
std::array<double, 4> chart_from_unitary_params(const UnitaryParams& p);
/// Axis uniform on the 3-sphere, phase uniform in [0, 2 pi).
UnitaryParams random_unitary_params(Rng& rng);

/// exp(i H) with H Hermitian built from n^2 reals: n diagonal entries, then
/// (re, im) pairs of the strict upper triangle in row-major order.
ComplexMatrix unitary_from_generator(std::span<const double> coeffs, int n);
inline constexpr int generator_size(int n) { return n * n; }

struct SimplexRun {
  std::vector<double> best_point;
  double best_value = 0.0;
  long evaluations = 0;
  int iterations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Nelder-Mead maximization from `start` with initial edge length `step`.
/// Converged when, over a full cycle of n+1 iterations, the best value moved
/// by less than `tolerance` and the simplex values span less than it. On
/// convergence the simplex is rebuilt around the best point; the run stops
/// once a rebuild gains less than `tolerance` or the iteration cap is hit.
SimplexRun nelder_mead_maximize(const Objective& f, std::vector<double> start, double step, int max_iterations,
                                double tolerance);

struct MultiStartRun {
  std::vector<double> best_point;
  double best_value = 0.0;
  std::vector<double> restart_values;
  long evaluations = 0;
};

using StartSampler = std::function<std::vector<double>(Rng&)>;

/// Runs cfg.restarts independent simplex searches. Restart r draws its start
/// from derived_stream(cfg.seed, r), so results do not depend on scheduling
/// and adding restarts never lowers the best value.
MultiStartRun multistart_maximize(const Objective& f, const StartSampler& sampler, const OptimizerConfig& cfg,
                                  double step = 0.4);

}  // namespace delocal
