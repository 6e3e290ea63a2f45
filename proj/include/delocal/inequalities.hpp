// Trace-distance inequalities, purifications, SA states and conditioned games.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "delocal/games.hpp"
#include "delocal/simplex.hpp"

namespace delocal {

struct InequalityReport {
  double lhs;
  double rhs;
  double slack;  // rhs - lhs
  bool holds;    // slack >= -1e-10
};

InequalityReport make_inequality_report(double lhs, double rhs);

/// T(rho, sigma) against T_c(spectrum of rho ascending, spectrum of sigma
/// descending), zeros included.
InequalityReport lemma1_check(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Spectral purification sum_i sqrt(p_i)|v_i>|i> with a reference of
/// dimension rank(rho). The reference is appended as the last subsystem.
PureState purify(const DensityMatrix& rho);

/// lhs = T(U_A rho U_A^dagger, rho); rhs = trace distance between U_A|Psi>
/// and V_B|Psi> for the purification Psi of rho.
InequalityReport td_inequality(const DensityMatrix& rho, const ComplexMatrix& u_a, const ComplexMatrix& v_b);

/// Excess above this counts as a violation in scans.
inline constexpr double kViolationTol = 1e-8;

/// max over U_A, V_B in U(2) of lhs - rhs.
double max_td_excess(const DensityMatrix& rho, const OptimizerConfig& cfg);

struct ViolationScan {
  std::vector<double> a;
  std::vector<double> max_excess;
  std::optional<double> threshold;  // smallest a with max_excess > kViolationTol
};

/// Werner states (psi+) on a = 0, step, ..., 1; grid point i uses a seed
/// derived from (cfg.seed, i).
ViolationScan werner_violation_scan(double step, const OptimizerConfig& cfg);

/// sum_ij c_ij |ii><jj| for a Hermitian PSD unit-trace coefficient matrix c.
class SAState {
 public:
  explicit SAState(ComplexMatrix coefficients);
  static SAState two_qubit(double rho00, Complex rho01);

  int local_dim() const noexcept { return static_cast<int>(c_.rows()); }
  const ComplexMatrix& coefficients() const noexcept { return c_; }
  DensityMatrix assemble() const;

 private:
  ComplexMatrix assemble_unchecked() const;
  ComplexMatrix c_;
};

struct SaOptimum {
  double max_trace_distance;  // T at relative phase pi
  double concurrence;
  double phase_scan_max;      // numeric maximum over diagonal phase unitaries
  double pnp2_win;            // (1 + C)/2
};

/// Two-qubit SA states only. Throws InconsistencyError when the phase scan or
/// the concurrence disagree with the relative-phase-pi optimum.
SaOptimum sa_pnp2_optimum(const SAState& s);

enum class ConditionedVariant { Pnp1, Pnp2, Bd1, Bd2 };

ConditionedVariant parse_conditioned_variant(const std::string& label);
std::string conditioned_label(ConditionedVariant v);

class ConstraintError : public std::runtime_error {
 public:
  ConstraintError(const std::string& message, double residual) : std::runtime_error(message), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

inline constexpr double kConstraintTol = 1e-8;

struct ConditionedReport {
  ConditionedVariant variant;
  double objective;
  double constraint_residual;
  double classical_limit;  // value no separable resource can exceed
};

/// Throws ConstraintError when the tactic misses the variant's constraint by
/// more than kConstraintTol.
ConditionedReport conditioned_game_check(ConditionedVariant variant, const DensityMatrix& rho, const Tactic& t);

}  // namespace delocal
