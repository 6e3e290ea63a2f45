#include "delocal/measures.hpp"

#include <algorithm>
#include <cmath>

namespace delocal {

namespace {

void require_two_qubit(const Dims& dims, const char* what) {
  if (dims != Dims{2, 2}) throw DimensionError(std::string(what) + ": expected a two-qubit state");
}

// Columns: Phi+, i Phi-, i Psi+, Psi-.
ComplexMatrix magic_basis() {
  const double h = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  ComplexMatrix e = ComplexMatrix::Zero(4, 4);
  e(0, 0) = h;
  e(3, 0) = h;
  e(0, 1) = i * h;
  e(3, 1) = -i * h;
  e(1, 2) = i * h;
  e(2, 2) = i * h;
  e(1, 3) = h;
  e(2, 3) = -h;
  return e;
}

}  // namespace

SpectrumPair spectrum_pair(const DensityMatrix& rho) {
  RealVector up = herm_eigenvalues(rho.matrix()).cwiseMax(0.0);
  std::sort(up.begin(), up.end());
  return {up, up.reverse()};
}

double concurrence_pure(const PureState& psi) {
  require_two_qubit(psi.dims(), "concurrence_pure");
  const Schmidt s = schmidt(psi);
  return std::min(1.0, 2.0 * std::sqrt(s.lambda0 * s.lambda1));
}

double concurrence_mixed(const DensityMatrix& rho) {
  require_two_qubit(rho.dims(), "concurrence_mixed");
  // rho = R R^dagger on its support; the nonzero eigenvalues of rho rho~ are
  // those of A A^dagger with A = R^T (Y x Y) R.
  const HermEig eig = herm_eig(rho.matrix());
  std::vector<int> keep;
  for (int k = 0; k < 4; ++k)
    if (eig.values[k] > kEigenZeroTol) keep.push_back(k);
  ComplexMatrix r(4, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j)
    r.col(static_cast<Eigen::Index>(j)) = eig.vectors.col(keep[j]) * std::sqrt(eig.values[keep[j]]);
  const ComplexMatrix yy = tensor(pauli::y(), pauli::y());
  const ComplexMatrix a = r.transpose() * yy * r;
  const RealVector mu = herm_eigenvalues(a * a.adjoint());
  std::vector<double> roots(4, 0.0);
  for (Eigen::Index k = 0; k < mu.size(); ++k) roots[static_cast<std::size_t>(k)] = std::sqrt(std::max(0.0, mu[k]));
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return std::clamp(roots[0] - roots[1] - roots[2] - roots[3], 0.0, 1.0);
}

double entanglement_entropy(const PureState& psi) {
  require_two_qubit(psi.dims(), "entanglement_entropy");
  const Schmidt s = schmidt(psi);
  double e = 0.0;
  for (double l : {s.lambda0, s.lambda1})
    if (l > 0.0) e -= l * std::log2(l);
  return std::clamp(e, 0.0, 1.0);
}

FefResult fully_entangled_fraction(const DensityMatrix& rho) {
  require_two_qubit(rho.dims(), "fully_entangled_fraction");
  const ComplexMatrix e = magic_basis();
  const ComplexMatrix m = e.adjoint() * rho.matrix() * e;
  Eigen::Matrix4d re = m.real();
  re = 0.5 * (re + re.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(re);
  const Eigen::Vector4d c = solver.eigenvectors().col(3);
  ComplexVector phi = e * c.cast<Complex>();
  phi /= phi.norm();
  return {solver.eigenvalues()[3], PureState({2, 2}, phi)};
}

double fully_entangled_fraction_search(const DensityMatrix& rho, const OptimizerConfig& cfg) {
  require_two_qubit(rho.dims(), "fully_entangled_fraction_search");
  const ComplexVector phi_plus = bell_state(Bell::PhiPlus).amplitudes();
  const ComplexMatrix& m = rho.matrix();
  auto f = [&](std::span<const double> x) {
    const ComplexMatrix u = param_to_unitary(unitary_params_from_chart(x));
    const ComplexVector phi = tensor(pauli::identity(), u) * phi_plus;
    return phi.dot(m * phi).real();
  };
  auto sampler = [](Rng& rng) {
    const auto chart = chart_from_unitary_params(random_unitary_params(rng));
    return std::vector<double>(chart.begin(), chart.end());
  };
  return multistart_maximize(f, sampler, cfg).best_value;
}

double g_quantity(const PureState& psi, const OptimizerConfig& cfg) {
  require_two_qubit(psi.dims(), "g_quantity");
  const ComplexVector& v = psi.amplitudes();
  const ComplexMatrix id = pauli::identity();
  auto f = [&](std::span<const double> x) {
    const ComplexMatrix u = param_to_unitary(unitary_params_from_chart(x.subspan(0, 4)));
    const ComplexMatrix w = param_to_unitary(unitary_params_from_chart(x.subspan(4, 4)));
    const ComplexVector pu = tensor(u, id) * v;
    const ComplexVector pv = tensor(id, w) * v;
    // <U psi| P V psi> with P = I - |psi><psi|
    return std::abs(pu.dot(pv) - pu.dot(v) * v.dot(pv));
  };
  auto sampler = [](Rng& rng) {
    std::vector<double> x;
    for (int side = 0; side < 2; ++side) {
      const auto chart = chart_from_unitary_params(random_unitary_params(rng));
      x.insert(x.end(), chart.begin(), chart.end());
    }
    return x;
  };
  return multistart_maximize(f, sampler, cfg).best_value;
}

double kolmogorov(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw DimensionError("kolmogorov: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return 0.5 * sum;
}

double kolmogorov(const RealVector& p, const RealVector& q) {
  return kolmogorov(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())),
                    std::span<const double>(q.data(), static_cast<std::size_t>(q.size())));
}

double record_bound(const DensityMatrix& rho) {
  const SpectrumPair s = spectrum_pair(rho);
  return 0.5 + 0.5 * kolmogorov(s.ascending, s.descending);
}

MeasureReport measure(const State& state, const OptimizerConfig& cfg, bool with_g) {
  const DensityMatrix rho = as_density(state);
  require_two_qubit(rho.dims(), "measure");
  const FefResult fef = fully_entangled_fraction(rho);
  MeasureReport report{concurrence_mixed(rho), std::nullopt, fef.value, fef.state, std::nullopt, record_bound(rho)};
  std::optional<PureState> psi;
  if (const auto* p = std::get_if<PureState>(&state))
    psi = *p;
  else
    psi = as_pure(rho);
  if (psi) {
    report.concurrence = concurrence_pure(*psi);
    report.entropy = entanglement_entropy(*psi);
    if (with_g) report.g = g_quantity(*psi, cfg);
  }
  return report;
}

}  // namespace delocal
