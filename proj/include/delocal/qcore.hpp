// Dense complex linear algebra and two-party quantum state primitives.
//
// Subsystem ordering is big-endian throughout: the first subsystem in a dims
// list is the most significant index of the Kronecker product (A before B,
// system before ancilla).

#pragma once

#include <complex>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace delocal {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<int>;

/// Tolerance for Hermiticity, trace and eigenvalue-sign validation.
inline constexpr double kValidationTol = 1e-10;
/// Eigenvalues with magnitude below this are treated as zero.
inline constexpr double kEigenZeroTol = 1e-12;
/// Tolerance for unitarity of tactic operators.
inline constexpr double kUnitaryTol = 1e-9;

/// Invalid input value. field() names the offending parameter or flag.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An internal consistency check between two independent routes failed.
class InconsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

int total_dim(const Dims& dims);

/// Normalized state vector with subsystem dimensions.
class PureState {
 public:
  PureState(Dims dims, ComplexVector amplitudes);

  const Dims& dims() const noexcept { return dims_; }
  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
  int dim() const noexcept { return static_cast<int>(amplitudes_.size()); }
  ComplexMatrix projector() const;

 private:
  Dims dims_;
  ComplexVector amplitudes_;
};

/// Hermitian, positive semi-definite, unit-trace matrix with subsystem
/// dimensions. Stored exactly as given; validation uses kValidationTol.
class DensityMatrix {
 public:
  DensityMatrix(Dims dims, ComplexMatrix matrix);
  explicit DensityMatrix(const PureState& psi);

  const Dims& dims() const noexcept { return dims_; }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  int dim() const noexcept { return static_cast<int>(matrix_.rows()); }

 private:
  Dims dims_;
  ComplexMatrix matrix_;
};

using State = std::variant<PureState, DensityMatrix>;

DensityMatrix as_density(const State& state);
/// Returns the state vector when rho has rank one (largest eigenvalue within
/// kValidationTol of one).
std::optional<PureState> as_pure(const DensityMatrix& rho);

// --- Kronecker products and subsystem manipulation ---------------------------

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
PureState tensor(const PureState& a, const PureState& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Reduced operator on the subsystems listed in keep (any order; the result
/// keeps the original relative order). Works on subnormalized operators too.
ComplexMatrix partial_trace(const ComplexMatrix& m, const Dims& dims, std::span<const int> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

/// Reorders subsystems: output subsystem k is input subsystem order[k].
ComplexMatrix permute_subsystems(const ComplexMatrix& m, const Dims& dims, std::span<const int> order);
DensityMatrix permute_subsystems(const DensityMatrix& rho, std::span<const int> order);

/// Lifts a single-subsystem operator to the full space.
ComplexMatrix embed_operator(const ComplexMatrix& op, const Dims& dims, int subsystem);

// --- Spectral helpers ---------------------------------------------------------

struct HermEig {
  RealVector values;     // ascending
  ComplexMatrix vectors; // columns are eigenvectors
};

bool is_hermitian(const ComplexMatrix& m, double tol = kValidationTol);
bool is_unitary(const ComplexMatrix& m, double tol = kUnitaryTol);

/// Eigen-decomposition of (m + m^dagger)/2. Throws ValidationError when m is
/// not Hermitian within kValidationTol.
HermEig herm_eig(const ComplexMatrix& m);
RealVector herm_eigenvalues(const ComplexMatrix& m);

/// Sum of the eigenvalues above kEigenZeroTol.
double positive_eig_sum(const ComplexMatrix& h);

/// Half the trace norm of the difference. Accepts subnormalized operators.
double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma);
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

// --- Two-qubit pure-state structure -------------------------------------------

struct Schmidt {
  double lambda0 = 1.0;  // lambda0 >= lambda1, lambda0 + lambda1 = 1
  double lambda1 = 0.0;
  ComplexMatrix basis_a; // column k is |a_k>
  ComplexMatrix basis_b; // column k is |b_k>; psi = sum_k sqrt(lambda_k)|a_k b_k>
};

Schmidt schmidt(const PureState& psi);

/// |<phi|psi>|.
double overlap_abs(const PureState& phi, const PureState& psi);
bool equal_up_to_phase(const PureState& phi, const PureState& psi, double tol = 1e-8);

namespace pauli {
ComplexMatrix identity(int n = 2);
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

// --- Named constructors -------------------------------------------------------

enum class Bell { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

Bell parse_bell(const std::string& label);
std::string bell_label(Bell k);
PureState bell_state(Bell k);
PureState basis_state(const std::string& bits);
PureState schmidt_state(double r);
DensityMatrix werner_state(Bell k, double a);
DensityMatrix two_bell_mixture_state(double a);
/// Weights ordered (Phi+, Phi-, Psi+, Psi-).
DensityMatrix bell_diagonal_state(std::span<const double> weights);
/// rho00|00><00| + rho01|00><11| + h.c. + (1 - rho00)|11><11|.
DensityMatrix sa_state(double rho00, Complex rho01);
DensityMatrix maximally_mixed(const Dims& dims);

using ParamValue = std::variant<double, std::string>;
using StateParams = std::map<std::string, ParamValue>;

/// Builds a state from a name and parameter map. Names: bell, basis, schmidt,
/// werner, two_bell, bell_diagonal, sa, maximally_mixed.
State named_state(const std::string& name, const StateParams& params);

}  // namespace delocal
