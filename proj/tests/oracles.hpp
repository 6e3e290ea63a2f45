// Reference computations for tests. Each one takes a different route from the
// library so agreement is meaningful.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "delocal/qcore.hpp"
#include "delocal/random.hpp"

namespace oracle {

using delocal::Complex;
using delocal::ComplexMatrix;
using delocal::ComplexVector;

// Kronecker product by explicit index arithmetic.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// Tr_B of a (dA*dB)-square matrix by index contraction.
inline ComplexMatrix trace_out_second(const ComplexMatrix& m, int da, int db) {
  ComplexMatrix out = ComplexMatrix::Zero(da, da);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      for (int k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
  return out;
}

inline ComplexMatrix trace_out_first(const ComplexMatrix& m, int da, int db) {
  ComplexMatrix out = ComplexMatrix::Zero(db, db);
  for (int i = 0; i < db; ++i)
    for (int j = 0; j < db; ++j)
      for (int k = 0; k < da; ++k) out(i, j) += m(k * db + i, k * db + j);
  return out;
}

inline ComplexMatrix yy() {
  ComplexMatrix y(2, 2);
  y << 0.0, Complex(0, -1), Complex(0, 1), 0.0;
  return kron(y, y);
}

// Wootters concurrence from the (non-Hermitian) product rho * rho_tilde with a
// general complex eigensolver.
inline double wootters(const ComplexMatrix& rho) {
  const ComplexMatrix tilde = yy() * rho.conjugate() * yy();
  Eigen::ComplexEigenSolver<ComplexMatrix> es(rho * tilde);
  std::vector<double> l;
  for (int i = 0; i < 4; ++i) l.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i).real())));
  std::sort(l.rbegin(), l.rend());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

// Schmidt coefficients from the singular values of the reshaped amplitudes.
inline std::pair<double, double> schmidt_squares(const ComplexVector& psi) {
  ComplexMatrix m(2, 2);
  m << psi(0), psi(1), psi(2), psi(3);
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto s = svd.singularValues();
  return {s(0) * s(0), s(1) * s(1)};
}

inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

// Trace norm through singular values.
inline double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  Eigen::JacobiSVD<ComplexMatrix> svd(a - b);
  return 0.5 * svd.singularValues().sum();
}

// Best success over random two-outcome projective measurements {P, 1 - P},
// P a projector onto a random subspace of random rank.
inline double random_measurement_best(const ComplexMatrix& s1, const ComplexMatrix& s2, double p1, double p2,
                                      int samples, delocal::Rng& rng) {
  const int n = static_cast<int>(s1.rows());
  double best = 0.0;
  for (int i = 0; i < samples; ++i) {
    const ComplexMatrix u = delocal::haar_unitary(n, rng);
    const int rank = static_cast<int>(delocal::uniform01(rng) * (n + 1));
    const ComplexMatrix v = u.leftCols(rank);
    const ComplexMatrix proj = v * v.adjoint();
    const ComplexMatrix rest = ComplexMatrix::Identity(n, n) - proj;
    const double win = p1 * (proj * s1).trace().real() + p2 * (rest * s2).trace().real();
    best = std::max(best, win);
  }
  return best;
}

inline ComplexVector ket(std::initializer_list<Complex> amps) {
  ComplexVector v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (Complex a : amps) v(i++) = a;
  return v;
}

inline ComplexMatrix proj(const ComplexVector& v) { return v * v.adjoint(); }

inline ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

inline ComplexMatrix id(int n) { return ComplexMatrix::Identity(n, n); }

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oracle
