// Multi-start maximization of win probabilities over local unitaries.
#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "delocal/games.hpp"
#include "delocal/simplex.hpp"

namespace delocal {

struct OptimizationResult {
  double best_value;
  Tactic best_tactic;
  std::vector<double> restart_values;
  long evaluations;
  std::optional<PureState> best_state;  // separable search only
};

/// rho x |00><00| on (A, B, A', B'), regrouped as (A A' | B B').
DensityMatrix embed_with_ancilla(const DensityMatrix& rho);

/// Tactic for a parameter vector: 8 chart values for U(2) x U(2), or 32
/// generator coefficients for U(4) x U(4).
Tactic tactic_from_point(std::span<const double> x, int local_dim, const std::string& label);

/// cfg.dimension 2 needs a two-qubit rho. cfg.dimension 4 accepts a
/// two-qubit rho (the |00> ancilla is attached here) or an already embedded
/// 4 x 4 resource.
OptimizationResult optimize(const DensityMatrix& rho, const GameSpec& game, const OptimizerConfig& cfg);

/// Joint search over pure product resources (two Bloch angles per side) and
/// U(2) x U(2) tactics.
OptimizationResult optimize_separable(const GameSpec& game, const OptimizerConfig& cfg);

enum class SweepKind { Bare, WithAncilla };

struct SweepRow {
  double a;
  double p_opt;
  double record_bound;       // of the two-qubit Werner state
  double concurrence_bound;  // 3/4 + C/4
};

/// PNP at equal priors on Werner states (psi+) for a = 0, step, ..., 1.
/// Grid point i runs with its own seed derived from (cfg.seed, i).
std::vector<SweepRow> werner_sweep(SweepKind kind, double step, const OptimizerConfig& cfg);

/// Number of grid intervals for a step that divides [0, 1]; throws
/// ValidationError("step") otherwise.
int grid_intervals(double step);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace delocal
