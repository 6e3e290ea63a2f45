#include "delocal/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace delocal {

ValidationError::ValidationError(std::string field, const std::string& message)
    : std::invalid_argument(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

int total_dim(const Dims& dims) {
  int n = 1;
  for (int d : dims) {
    if (d <= 0) throw DimensionError(fmt::format("subsystem dimension {} is not positive", d));
    n *= d;
  }
  return n;
}

namespace {

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex& z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

// Mixed-radix digits of index, most significant subsystem first.
void to_digits(int index, const Dims& dims, std::vector<int>& out) {
  out.resize(dims.size());
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    out[k] = index % dims[k];
    index /= dims[k];
  }
}

int from_digits(const std::vector<int>& digits, const Dims& dims) {
  int index = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) index = index * dims[k] + digits[k];
  return index;
}

void check_dims(const Dims& dims, Eigen::Index n, const char* what) {
  if (dims.empty()) throw DimensionError(fmt::format("{}: empty dims", what));
  if (total_dim(dims) != n)
    throw DimensionError(fmt::format("{}: product of dims {} does not match size {}", what, total_dim(dims), n));
}

}  // namespace

// --- PureState / DensityMatrix ------------------------------------------------

PureState::PureState(Dims dims, ComplexVector amplitudes) : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
  check_dims(dims_, amplitudes_.size(), "PureState");
  for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) {
    if (!std::isfinite(amplitudes_[i].real()) || !std::isfinite(amplitudes_[i].imag()))
      throw ValidationError("amplitudes", "non-finite entry");
  }
  const double norm2 = amplitudes_.squaredNorm();
  if (std::abs(norm2 - 1.0) > kValidationTol)
    throw ValidationError("amplitudes", fmt::format("squared norm {:.17g} is not 1", norm2));
}

ComplexMatrix PureState::projector() const { return amplitudes_ * amplitudes_.adjoint(); }

DensityMatrix::DensityMatrix(Dims dims, ComplexMatrix matrix) : dims_(std::move(dims)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw DimensionError("DensityMatrix: matrix is not square");
  check_dims(dims_, matrix_.rows(), "DensityMatrix");
  if (!all_finite(matrix_)) throw ValidationError("matrix", "non-finite entry");
  if (!is_hermitian(matrix_)) throw ValidationError("matrix", "not Hermitian");
  const Complex tr = matrix_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > kValidationTol)
    throw ValidationError("matrix", fmt::format("trace {:.17g} is not 1", tr.real()));
  const RealVector ev = herm_eigenvalues(matrix_);
  if (ev.minCoeff() < -kValidationTol)
    throw ValidationError("matrix", fmt::format("negative eigenvalue {:.3e}", ev.minCoeff()));
}

DensityMatrix::DensityMatrix(const PureState& psi) : dims_(psi.dims()), matrix_(psi.projector()) {}

DensityMatrix as_density(const State& state) {
  if (const auto* psi = std::get_if<PureState>(&state)) return DensityMatrix(*psi);
  return std::get<DensityMatrix>(state);
}

std::optional<PureState> as_pure(const DensityMatrix& rho) {
  const HermEig eig = herm_eig(rho.matrix());
  const Eigen::Index top = eig.values.size() - 1;
  if (eig.values[top] < 1.0 - kValidationTol) return std::nullopt;
  ComplexVector v = eig.vectors.col(top);
  v /= v.norm();
  return PureState(rho.dims(), v);
}

// --- Kronecker products and subsystems ---------------------------------------

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

PureState tensor(const PureState& a, const PureState& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  ComplexVector v = tensor(ComplexMatrix(a.amplitudes()), ComplexMatrix(b.amplitudes()));
  v /= v.norm();
  return PureState(std::move(dims), std::move(v));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DensityMatrix(std::move(dims), tensor(a.matrix(), b.matrix()));
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const Dims& dims, std::span<const int> keep) {
  check_dims(dims, m.rows(), "partial_trace");
  const int n = static_cast<int>(dims.size());
  if (keep.empty()) throw DimensionError("partial_trace: keep set is empty");
  std::vector<bool> kept(n, false);
  for (int k : keep) {
    if (k < 0 || k >= n) throw DimensionError(fmt::format("partial_trace: subsystem index {} out of range", k));
    if (kept[k]) throw DimensionError(fmt::format("partial_trace: subsystem index {} repeated", k));
    kept[k] = true;
  }
  Dims kept_dims, traced_dims;
  for (int k = 0; k < n; ++k) (kept[k] ? kept_dims : traced_dims).push_back(dims[k]);
  const int dk = total_dim(kept_dims);
  const int dt = traced_dims.empty() ? 1 : total_dim(traced_dims);

  std::vector<int> rk, ck, td, full(n);
  auto compose = [&](const std::vector<int>& kd, const std::vector<int>& tdig) {
    std::size_t ik = 0, it = 0;
    for (int k = 0; k < n; ++k) full[k] = kept[k] ? kd[ik++] : tdig[it++];
    return from_digits(full, dims);
  };

  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (int r = 0; r < dk; ++r) {
    to_digits(r, kept_dims, rk);
    for (int c = 0; c < dk; ++c) {
      to_digits(c, kept_dims, ck);
      Complex acc = 0.0;
      for (int t = 0; t < dt; ++t) {
        if (traced_dims.empty()) td.clear(); else to_digits(t, traced_dims, td);
        acc += m(compose(rk, td), compose(ck, td));
      }
      out(r, c) = acc;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  ComplexMatrix reduced = partial_trace(rho.matrix(), rho.dims(), keep);
  std::vector<int> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  Dims dims;
  for (int k : sorted) dims.push_back(rho.dims()[k]);
  return DensityMatrix(std::move(dims), std::move(reduced));
}

ComplexMatrix permute_subsystems(const ComplexMatrix& m, const Dims& dims, std::span<const int> order) {
  check_dims(dims, m.rows(), "permute_subsystems");
  const int n = static_cast<int>(dims.size());
  if (static_cast<int>(order.size()) != n) throw DimensionError("permute_subsystems: order has wrong length");
  std::vector<int> sorted(order.begin(), order.end());
  std::sort(sorted.begin(), sorted.end());
  for (int k = 0; k < n; ++k)
    if (sorted[k] != k) throw DimensionError("permute_subsystems: order is not a permutation");

  Dims out_dims(n);
  for (int k = 0; k < n; ++k) out_dims[k] = dims[order[k]];
  const int d = total_dim(dims);
  std::vector<int> src(d);
  std::vector<int> od, id(n);
  for (int i = 0; i < d; ++i) {
    to_digits(i, out_dims, od);
    for (int k = 0; k < n; ++k) id[order[k]] = od[k];
    src[i] = from_digits(id, dims);
  }
  ComplexMatrix out(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out(i, j) = m(src[i], src[j]);
  return out;
}

DensityMatrix permute_subsystems(const DensityMatrix& rho, std::span<const int> order) {
  Dims out_dims(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) out_dims[k] = rho.dims().at(order[k]);
  return DensityMatrix(std::move(out_dims), permute_subsystems(rho.matrix(), rho.dims(), order));
}

ComplexMatrix embed_operator(const ComplexMatrix& op, const Dims& dims, int subsystem) {
  if (subsystem < 0 || subsystem >= static_cast<int>(dims.size()))
    throw DimensionError("embed_operator: subsystem out of range");
  if (op.rows() != dims[subsystem] || op.cols() != dims[subsystem])
    throw DimensionError("embed_operator: operator does not match subsystem dimension");
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int k = 0; k < static_cast<int>(dims.size()); ++k)
    out = tensor(out, k == subsystem ? op : ComplexMatrix(ComplexMatrix::Identity(dims[k], dims[k])));
  return out;
}

// --- Spectral helpers ---------------------------------------------------------

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const ComplexMatrix id = ComplexMatrix::Identity(m.rows(), m.cols());
  return (m.adjoint() * m - id).cwiseAbs().maxCoeff() <= tol;
}

HermEig herm_eig(const ComplexMatrix& m) {
  if (!is_hermitian(m)) throw ValidationError("matrix", "not Hermitian within tolerance");
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector herm_eigenvalues(const ComplexMatrix& m) {
  if (!is_hermitian(m)) throw ValidationError("matrix", "not Hermitian within tolerance");
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double positive_eig_sum(const ComplexMatrix& h) {
  const RealVector ev = herm_eigenvalues(h);
  double sum = 0.0;
  for (double v : ev)
    if (v > kEigenZeroTol) sum += v;
  return sum;
}

double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw DimensionError("trace_distance: dimension mismatch");
  return 0.5 * herm_eigenvalues(rho - sigma).cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dims() != sigma.dims()) throw DimensionError("trace_distance: dims mismatch");
  return trace_distance(rho.matrix(), sigma.matrix());
}

// --- Schmidt decomposition ----------------------------------------------------

Schmidt schmidt(const PureState& psi) {
  if (psi.dims() != Dims{2, 2}) throw DimensionError("schmidt: expected a two-qubit state");
  Eigen::Matrix2cd m;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) m(a, b) = psi.amplitudes()[2 * a + b];
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector2d s = svd.singularValues();
  Schmidt out;
  const double s0 = s[0] * s[0], s1 = s[1] * s[1];
  out.lambda0 = s0 / (s0 + s1);
  out.lambda1 = s1 / (s0 + s1);
  out.basis_a = svd.matrixU();
  out.basis_b = svd.matrixV().conjugate();
  return out;
}

double overlap_abs(const PureState& phi, const PureState& psi) {
  if (phi.dim() != psi.dim()) throw DimensionError("overlap: dimension mismatch");
  return std::abs(phi.amplitudes().dot(psi.amplitudes()));
}

bool equal_up_to_phase(const PureState& phi, const PureState& psi, double tol) {
  return std::abs(overlap_abs(phi, psi) - 1.0) <= tol;
}

namespace pauli {
ComplexMatrix identity(int n) { return ComplexMatrix::Identity(n, n); }
ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}
ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
}  // namespace pauli

// --- Named constructors -------------------------------------------------------

Bell parse_bell(const std::string& label) {
  if (label == "phi+" || label == "Phi+" || label == "phi_plus") return Bell::PhiPlus;
  if (label == "phi-" || label == "Phi-" || label == "phi_minus") return Bell::PhiMinus;
  if (label == "psi+" || label == "Psi+" || label == "psi_plus") return Bell::PsiPlus;
  if (label == "psi-" || label == "Psi-" || label == "psi_minus") return Bell::PsiMinus;
  throw ValidationError("k", fmt::format("unknown Bell label '{}'", label));
}

std::string bell_label(Bell k) {
  switch (k) {
    case Bell::PhiPlus: return "phi+";
    case Bell::PhiMinus: return "phi-";
    case Bell::PsiPlus: return "psi+";
    case Bell::PsiMinus: return "psi-";
  }
  return "?";
}

PureState bell_state(Bell k) {
  const double h = 1.0 / std::sqrt(2.0);
  ComplexVector v = ComplexVector::Zero(4);
  switch (k) {
    case Bell::PhiPlus: v[0] = h; v[3] = h; break;
    case Bell::PhiMinus: v[0] = h; v[3] = -h; break;
    case Bell::PsiPlus: v[1] = h; v[2] = h; break;
    case Bell::PsiMinus: v[1] = h; v[2] = -h; break;
  }
  return PureState({2, 2}, v);
}

PureState basis_state(const std::string& bits) {
  if (bits.empty()) throw ValidationError("bits", "empty bit string");
  int index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw ValidationError("bits", fmt::format("'{}' is not a bit string", bits));
    index = 2 * index + (c - '0');
  }
  ComplexVector v = ComplexVector::Zero(1 << bits.size());
  v[index] = 1.0;
  return PureState(Dims(bits.size(), 2), v);
}

PureState schmidt_state(double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw ValidationError("r", fmt::format("{} is outside [0, 1]", r));
  ComplexVector v = ComplexVector::Zero(4);
  v[0] = std::sqrt(r);
  v[3] = std::sqrt(1.0 - r);
  return PureState({2, 2}, v);
}

DensityMatrix werner_state(Bell k, double a) {
  if (!(a >= 0.0 && a <= 1.0)) throw ValidationError("a", fmt::format("{} is outside [0, 1]", a));
  ComplexMatrix m = a * bell_state(k).projector() + (1.0 - a) / 4.0 * ComplexMatrix::Identity(4, 4);
  return DensityMatrix({2, 2}, m);
}

DensityMatrix two_bell_mixture_state(double a) {
  if (!(a >= 0.0 && a <= 1.0)) throw ValidationError("a", fmt::format("{} is outside [0, 1]", a));
  ComplexMatrix m = a * bell_state(Bell::PsiPlus).projector() + (1.0 - a) * bell_state(Bell::PsiMinus).projector();
  return DensityMatrix({2, 2}, m);
}

DensityMatrix bell_diagonal_state(std::span<const double> weights) {
  if (weights.size() != 4) throw ValidationError("weights", "expected four Bell weights");
  double sum = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (!(weights[i] >= 0.0)) throw ValidationError(fmt::format("p{}", i + 1), "weight is negative");
    sum += weights[i];
  }
  if (std::abs(sum - 1.0) > kValidationTol) throw ValidationError("weights", fmt::format("weights sum to {}", sum));
  const Bell order[4] = {Bell::PhiPlus, Bell::PhiMinus, Bell::PsiPlus, Bell::PsiMinus};
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) m += weights[i] * bell_state(order[i]).projector();
  return DensityMatrix({2, 2}, m);
}

DensityMatrix sa_state(double rho00, Complex rho01) {
  if (!(rho00 >= 0.0 && rho00 <= 1.0)) throw ValidationError("rho00", fmt::format("{} is outside [0, 1]", rho00));
  const double limit = std::sqrt(rho00 * (1.0 - rho00));
  if (std::abs(rho01) > limit + kValidationTol)
    throw ValidationError("rho01", fmt::format("|rho01| = {} exceeds sqrt(rho00 (1 - rho00)) = {}", std::abs(rho01), limit));
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = rho00;
  m(3, 3) = 1.0 - rho00;
  m(0, 3) = rho01;
  m(3, 0) = std::conj(rho01);
  return DensityMatrix({2, 2}, m);
}

DensityMatrix maximally_mixed(const Dims& dims) {
  const int n = total_dim(dims);
  return DensityMatrix(dims, ComplexMatrix::Identity(n, n) / static_cast<double>(n));
}

namespace {

double get_double(const StateParams& params, const std::string& key) {
  auto it = params.find(key);
  if (it == params.end()) throw ValidationError(key, "missing parameter");
  if (const auto* d = std::get_if<double>(&it->second)) return *d;
  const std::string& s = std::get<std::string>(it->second);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(key, fmt::format("'{}' is not a number", s));
  }
}

double get_double_or(const StateParams& params, const std::string& key, double fallback) {
  return params.count(key) ? get_double(params, key) : fallback;
}

std::string get_string(const StateParams& params, const std::string& key, const std::string& fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
  throw ValidationError(key, "expected a label, got a number");
}

void reject_unknown(const StateParams& params, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : params) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ValidationError(key, "unknown parameter");
  }
}

}  // namespace

State named_state(const std::string& name, const StateParams& params) {
  if (name == "bell") {
    reject_unknown(params, {"k"});
    return bell_state(parse_bell(get_string(params, "k", "phi+")));
  }
  if (name == "basis" || name == "product") {
    reject_unknown(params, {"bits"});
    return basis_state(get_string(params, "bits", "00"));
  }
  if (name == "schmidt") {
    reject_unknown(params, {"r"});
    return schmidt_state(get_double(params, "r"));
  }
  if (name == "werner") {
    reject_unknown(params, {"k", "a"});
    return werner_state(parse_bell(get_string(params, "k", "psi+")), get_double(params, "a"));
  }
  if (name == "two_bell") {
    reject_unknown(params, {"a"});
    return two_bell_mixture_state(get_double(params, "a"));
  }
  if (name == "bell_diagonal") {
    reject_unknown(params, {"p1", "p2", "p3", "p4"});
    const double w[4] = {get_double(params, "p1"), get_double(params, "p2"), get_double(params, "p3"),
                         get_double(params, "p4")};
    return bell_diagonal_state(w);
  }
  if (name == "sa") {
    reject_unknown(params, {"rho00", "rho01", "rho01_im"});
    return sa_state(get_double(params, "rho00"),
                    Complex(get_double(params, "rho01"), get_double_or(params, "rho01_im", 0.0)));
  }
  if (name == "maximally_mixed") {
    reject_unknown(params, {"d"});
    const int d = static_cast<int>(get_double_or(params, "d", 2.0));
    return maximally_mixed({d, d});
  }
  throw ValidationError("name", fmt::format("unknown state name '{}'", name));
}

}  // namespace delocal
