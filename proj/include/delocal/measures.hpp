// Entanglement measures and the spectral ingredients of the record bound.
#pragma once

#include <optional>
#include <span>

#include "delocal/qcore.hpp"
#include "delocal/simplex.hpp"

namespace delocal {

/// Full spectrum of a density matrix (zeros included), clipped at zero.
struct SpectrumPair {
  RealVector ascending;
  RealVector descending;
};

SpectrumPair spectrum_pair(const DensityMatrix& rho);

/// 2 sqrt(lambda0 lambda1) from the Schmidt coefficients.
double concurrence_pure(const PureState& psi);

/// Wootters concurrence max(0, s1 - s2 - s3 - s4), s = square roots of the
/// eigenvalues of rho * (Y x Y) rho^* (Y x Y) in descending order. The
/// eigenvalue problem is reduced to the support of rho so that exact zeros
/// stay exact.
double concurrence_mixed(const DensityMatrix& rho);

/// Base-2 entropy of the Schmidt coefficients.
double entanglement_entropy(const PureState& psi);

struct FefResult {
  double value;
  PureState state;  // maximally entangled state attaining value
};

/// Largest overlap with a maximally entangled two-qubit state, from the top
/// eigenvector of the real part of rho in the magic basis.
FefResult fully_entangled_fraction(const DensityMatrix& rho);

/// Cross-check of the above: direct maximization of <phi|rho|phi> over
/// phi = (I x U)|Phi+>, U in U(2).
double fully_entangled_fraction_search(const DensityMatrix& rho, const OptimizerConfig& cfg);

/// max over local unitaries U_A, V_B of |<psi| U_A^dagger P V_B |psi>| with
/// P the projector orthogonal to psi.
double g_quantity(const PureState& psi, const OptimizerConfig& cfg);

/// Classical trace distance 1/2 sum |p_i - q_i|. Lengths must match.
double kolmogorov(std::span<const double> p, std::span<const double> q);
double kolmogorov(const RealVector& p, const RealVector& q);

/// 1/2 + 1/2 T_c(lambda_up, lambda_down) over rho's full spectrum.
double record_bound(const DensityMatrix& rho);

struct MeasureReport {
  double concurrence;
  std::optional<double> entropy;  // pure inputs only
  double fef;
  PureState fef_state;
  std::optional<double> g;        // pure inputs only, when requested
  double record_bound;
};

/// All measures for a two-qubit state. g is computed only when with_g is set
/// and the state is pure.
MeasureReport measure(const State& state, const OptimizerConfig& cfg, bool with_g = false);

}  // namespace delocal
