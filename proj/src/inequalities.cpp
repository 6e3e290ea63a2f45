#include "delocal/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "delocal/measures.hpp"
#include "delocal/optimizer.hpp"

namespace delocal {

namespace {

ComplexMatrix on_a(const ComplexMatrix& u) { return tensor(u, pauli::identity()); }
ComplexMatrix on_b(const ComplexMatrix& v) { return tensor(pauli::identity(), v); }

void require_two_qubit(const DensityMatrix& rho, const char* what) {
  if (rho.dims() != Dims{2, 2}) throw DimensionError(std::string(what) + ": expected a two-qubit state");
}

ComplexMatrix phase_unitary(double phi) {
  ComplexMatrix u = ComplexMatrix::Identity(2, 2);
  u(1, 1) = std::polar(1.0, phi);
  return u;
}

}  // namespace

InequalityReport make_inequality_report(double lhs, double rhs) {
  const double slack = rhs - lhs;
  return {lhs, rhs, slack, slack >= -kValidationTol};
}

InequalityReport lemma1_check(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("lemma1_check: dimension mismatch");
  return make_inequality_report(trace_distance(rho.matrix(), sigma.matrix()),
                                kolmogorov(spectrum_pair(rho).ascending, spectrum_pair(sigma).descending));
}

PureState purify(const DensityMatrix& rho) {
  const HermEig eig = herm_eig(rho.matrix());
  std::vector<Eigen::Index> support;
  for (Eigen::Index k = eig.values.size() - 1; k >= 0; --k)
    if (eig.values[k] > kEigenZeroTol) support.push_back(k);
  const Eigen::Index r = static_cast<Eigen::Index>(support.size());
  ComplexVector psi = ComplexVector::Zero(rho.dim() * r);
  for (Eigen::Index i = 0; i < r; ++i) {
    const Eigen::Index k = support[static_cast<std::size_t>(i)];
    const ComplexVector v = eig.vectors.col(k) * std::sqrt(eig.values[k]);
    for (Eigen::Index s = 0; s < rho.dim(); ++s) psi[s * r + i] = v[s];
  }
  psi /= psi.norm();
  Dims dims = rho.dims();
  dims.push_back(static_cast<int>(r));
  return PureState(dims, psi);
}

InequalityReport td_inequality(const DensityMatrix& rho, const ComplexMatrix& u_a, const ComplexMatrix& v_b) {
  require_two_qubit(rho, "td_inequality");
  if (!is_unitary(u_a) || u_a.rows() != 2) throw ValidationError("u_a", "not a 2x2 unitary");
  if (!is_unitary(v_b) || v_b.rows() != 2) throw ValidationError("v_b", "not a 2x2 unitary");
  const ComplexMatrix ua = on_a(u_a);
  const double lhs = trace_distance(ua * rho.matrix() * ua.adjoint(), rho.matrix());
  const PureState psi = purify(rho);
  const int ref = psi.dims().back();
  const ComplexMatrix id_ref = ComplexMatrix::Identity(ref, ref);
  const ComplexVector a = tensor(ua, id_ref) * psi.amplitudes();
  const ComplexVector b = tensor(on_b(v_b), id_ref) * psi.amplitudes();
  // sqrt(1 - |<a|b>|^2) as the norm of b's component orthogonal to a, which
  // stays accurate when the overlap is close to one.
  return make_inequality_report(lhs, (b - a.dot(b) * a).norm());
}

double max_td_excess(const DensityMatrix& rho, const OptimizerConfig& cfg) {
  require_two_qubit(rho, "max_td_excess");
  const ComplexMatrix& m = rho.matrix();
  // rho = R R^dagger; the purification is vec(R), so U_A|Psi> is vec(U_A R).
  const HermEig eig = herm_eig(m);
  const ComplexMatrix r = eig.vectors * eig.values.cwiseMax(0.0).cwiseSqrt().cast<Complex>().asDiagonal();
  auto f = [&](std::span<const double> x) {
    const Tactic t = tactic_from_point(x, 2, "scan");
    const ComplexMatrix ua = on_a(t.u_a());
    const double lhs = trace_distance(ua * m * ua.adjoint(), m);
    const ComplexMatrix a = ua * r, b = on_b(t.v_b()) * r;
    const Complex overlap = (a.adjoint() * b).trace();
    return lhs - (b - overlap * a).norm();
  };
  auto sampler = [](Rng& rng) {
    std::vector<double> x;
    for (int side = 0; side < 2; ++side) {
      const auto chart = chart_from_unitary_params(random_unitary_params(rng));
      x.insert(x.end(), chart.begin(), chart.end());
    }
    return x;
  };
  return multistart_maximize(f, sampler, cfg, 0.4).best_value;
}

ViolationScan werner_violation_scan(double step, const OptimizerConfig& cfg) {
  const int n = grid_intervals(step);
  ViolationScan scan;
  for (int i = 0; i <= n; ++i) {
    const double a = static_cast<double>(i) / n;
    OptimizerConfig point = cfg;
    point.dimension = 2;
    point.seed = derived_stream(cfg.seed, 0x200000u + static_cast<std::uint64_t>(i))();
    const double excess = max_td_excess(werner_state(Bell::PsiPlus, a), point);
    scan.a.push_back(a);
    scan.max_excess.push_back(excess);
    if (!scan.threshold && excess > kViolationTol) scan.threshold = a;
  }
  return scan;
}

SAState::SAState(ComplexMatrix coefficients) : c_(std::move(coefficients)) {
  if (c_.rows() != c_.cols() || c_.rows() < 2) throw ValidationError("coefficients", "expected a square matrix, d >= 2");
  const ComplexMatrix m = assemble_unchecked();
  (void)DensityMatrix({local_dim(), local_dim()}, m);
}

SAState SAState::two_qubit(double rho00, Complex rho01) {
  if (!(rho00 >= 0.0 && rho00 <= 1.0)) throw ValidationError("rho00", fmt::format("{} is outside [0, 1]", rho00));
  const double limit = std::sqrt(rho00 * (1.0 - rho00));
  if (std::abs(rho01) > limit + kValidationTol)
    throw ValidationError("rho01",
                          fmt::format("|rho01| = {} exceeds sqrt(rho00 (1 - rho00)) = {}", std::abs(rho01), limit));
  ComplexMatrix c(2, 2);
  c << rho00, rho01, std::conj(rho01), 1.0 - rho00;
  return SAState(c);
}

ComplexMatrix SAState::assemble_unchecked() const {
  const int d = local_dim();
  ComplexMatrix m = ComplexMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i * d + i, j * d + j) = c_(i, j);
  return m;
}

DensityMatrix SAState::assemble() const { return DensityMatrix({local_dim(), local_dim()}, assemble_unchecked()); }

SaOptimum sa_pnp2_optimum(const SAState& s) {
  if (s.local_dim() != 2) throw ValidationError("state", "SA optimum is implemented for two qubits only");
  const DensityMatrix rho = s.assemble();
  const ComplexMatrix& m = rho.matrix();
  auto t_at = [&](double phi) {
    const ComplexMatrix u = on_a(phase_unitary(phi));
    return trace_distance(u * m * u.adjoint(), m);
  };
  SaOptimum out{};
  out.max_trace_distance = t_at(std::numbers::pi);
  out.concurrence = concurrence_mixed(rho);
  constexpr int kScan = 3600;
  out.phase_scan_max = 0.0;
  for (int k = 0; k < kScan; ++k)
    out.phase_scan_max = std::max(out.phase_scan_max, t_at(2.0 * std::numbers::pi * k / kScan));
  out.pnp2_win = 0.5 * (1.0 + out.concurrence);
  if (std::abs(out.phase_scan_max - out.max_trace_distance) > 1e-9)
    throw InconsistencyError(fmt::format("phase scan maximum {} differs from the phase-pi value {}",
                                         out.phase_scan_max, out.max_trace_distance));
  if (std::abs(out.concurrence - out.max_trace_distance) > 1e-9)
    throw InconsistencyError(fmt::format("SA concurrence {} differs from the maximal trace distance {}",
                                         out.concurrence, out.max_trace_distance));
  return out;
}

ConditionedVariant parse_conditioned_variant(const std::string& label) {
  if (label == "pnp1") return ConditionedVariant::Pnp1;
  if (label == "pnp2") return ConditionedVariant::Pnp2;
  if (label == "bd1") return ConditionedVariant::Bd1;
  if (label == "bd2") return ConditionedVariant::Bd2;
  throw ValidationError("variant", fmt::format("unknown conditioned game '{}'", label));
}

std::string conditioned_label(ConditionedVariant v) {
  switch (v) {
    case ConditionedVariant::Pnp1: return "pnp1";
    case ConditionedVariant::Pnp2: return "pnp2";
    case ConditionedVariant::Bd1: return "bd1";
    case ConditionedVariant::Bd2: return "bd2";
  }
  return "?";
}

ConditionedReport conditioned_game_check(ConditionedVariant variant, const DensityMatrix& rho, const Tactic& t) {
  require_two_qubit(rho, "conditioned_game_check");
  if (t.local_dim() != 2) throw DimensionError("conditioned_game_check: expected a two-qubit tactic");
  const ComplexMatrix& m = rho.matrix();
  const ComplexMatrix ua = on_a(t.u_a()), vb = on_b(t.v_b());
  const ComplexMatrix u_rho_u = ua * m * ua.adjoint();
  const ComplexMatrix v_rho_v = vb * m * vb.adjoint();
  const double re_dag = (ua * m * vb.adjoint()).trace().real();
  const double re_plain = (ua * m * vb).trace().real();

  ConditionedReport r{variant, 0.0, 0.0, 0.0};
  switch (variant) {
    case ConditionedVariant::Pnp1:
      r.objective = 0.75 + 0.25 * re_dag;
      r.constraint_residual = std::abs(trace_distance(m, 0.5 * (u_rho_u + v_rho_v)) - 1.0);
      r.classical_limit = 0.75;
      break;
    case ConditionedVariant::Pnp2:
      r.objective = 0.5 * (1.0 + trace_distance(u_rho_u, m));
      r.constraint_residual = std::abs(re_dag - 1.0);
      r.classical_limit = 0.5;
      break;
    case ConditionedVariant::Bd1: {
      const ComplexMatrix uv = ua * vb;
      r.objective = 0.5 + 0.25 * (re_dag + re_plain);
      r.constraint_residual =
          std::abs(trace_distance(0.5 * (m + uv * m * uv.adjoint()), 0.5 * (u_rho_u + v_rho_v)) - 1.0);
      r.classical_limit = 0.5;
      break;
    }
    case ConditionedVariant::Bd2:
      r.objective = 0.5 * (1.0 + trace_distance(u_rho_u, m));
      r.constraint_residual = std::max(std::abs(re_dag - 1.0), std::abs(re_plain - 1.0));
      r.classical_limit = 0.5;
      break;
  }
  if (r.constraint_residual > kConstraintTol)
    throw ConstraintError(fmt::format("{} constraint violated: residual {:.3e}", conditioned_label(variant),
                                      r.constraint_residual),
                          r.constraint_residual);
  return r;
}

}  // namespace delocal
