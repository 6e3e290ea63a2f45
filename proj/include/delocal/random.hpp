// Seeded random states and unitaries for restarts, sampling and fuzzing.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "delocal/qcore.hpp"

namespace delocal {

using Rng = std::mt19937_64;

/// Independent stream for (seed, index); streams do not depend on how many
/// values earlier streams consumed.
Rng derived_stream(std::uint64_t seed, std::uint64_t index);

/// Uniform double in [0, 1) built from 53 random bits (portable across
/// standard libraries).
double uniform01(Rng& rng);
double standard_normal(Rng& rng);

ComplexMatrix haar_unitary(int n, Rng& rng);
PureState random_pure(const Dims& dims, Rng& rng);
/// Hilbert-Schmidt random density matrix (full rank almost surely).
DensityMatrix random_density(const Dims& dims, Rng& rng);
/// Uniform on the probability simplex.
std::vector<double> dirichlet_ones(int n, Rng& rng);
/// Convex mixture of `terms` Haar-random two-qubit product states.
DensityMatrix random_separable(Rng& rng, int terms = 4);

}  // namespace delocal
