#include "delocal/random.hpp"

#include <cmath>
#include <numbers>

namespace delocal {

Rng derived_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x5eedu};
  return Rng(seq);
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double standard_normal(Rng& rng) {
  // Box-Muller; avoids the implementation-defined std::normal_distribution.
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

ComplexMatrix ginibre(int rows, int cols, Rng& rng) {
  ComplexMatrix g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = Complex(standard_normal(rng), standard_normal(rng));
  return g;
}

}  // namespace

ComplexMatrix haar_unitary(int n, Rng& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(n, n, rng));
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

PureState random_pure(const Dims& dims, Rng& rng) {
  ComplexVector v = ginibre(total_dim(dims), 1, rng);
  v /= v.norm();
  return PureState(dims, v);
}

DensityMatrix random_density(const Dims& dims, Rng& rng) {
  const int n = total_dim(dims);
  const ComplexMatrix g = ginibre(n, n, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint());
  return DensityMatrix(dims, rho);
}

std::vector<double> dirichlet_ones(int n, Rng& rng) {
  std::vector<double> w(n);
  double sum = 0.0;
  for (double& x : w) {
    double u = uniform01(rng);
    while (u <= 0.0) u = uniform01(rng);
    x = -std::log(u);
    sum += x;
  }
  for (double& x : w) x /= sum;
  return w;
}

DensityMatrix random_separable(Rng& rng, int terms) {
  const std::vector<double> w = dirichlet_ones(terms, rng);
  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  for (int i = 0; i < terms; ++i) {
    const PureState a = random_pure({2}, rng);
    const PureState b = random_pure({2}, rng);
    rho += w[i] * tensor(a, b).projector();
  }
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  return DensityMatrix({2, 2}, rho);
}

}  // namespace delocal
