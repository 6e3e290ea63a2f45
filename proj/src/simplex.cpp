#include "delocal/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

namespace delocal {

void OptimizerConfig::validate() const {
  if (restarts <= 0) throw ValidationError("restarts", "must be positive");
  if (max_iterations <= 0) throw ValidationError("max_iterations", "must be positive");
  if (!(tolerance > 0.0)) throw ValidationError("tolerance", "must be positive");
  if (dimension != 2 && dimension != 4) throw ValidationError("dimension", "must be 2 or 4");
}

ComplexMatrix param_to_unitary(const UnitaryParams& p) {
  double norm2 = 0.0;
  for (double a : p.axis) norm2 += a * a;
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) throw ValidationError("axis", "axis must be a nonzero finite vector");
  std::array<double, 4> a = p.axis;
  if (std::abs(norm2 - 1.0) > 1e-12) {
    std::clog << fmt::format("warning: unitary axis has squared norm {:.17g}; normalizing\n", norm2);
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : a) x *= inv;
  }
  const Complex i(0.0, 1.0);
  ComplexMatrix u = a[0] * pauli::identity() + i * a[1] * pauli::x() + i * a[2] * pauli::y() + i * a[3] * pauli::z();
  return std::exp(i * p.phase) * u;
}

UnitaryParams unitary_params_from_chart(std::span<const double> chart) {
  if (chart.size() != 4) throw DimensionError("unitary chart needs 4 reals");
  const double t1 = chart[1], t2 = chart[2], t3 = chart[3];
  UnitaryParams p;
  p.phase = chart[0];
  p.axis = {std::cos(t1), std::sin(t1) * std::cos(t2), std::sin(t1) * std::sin(t2) * std::cos(t3),
            std::sin(t1) * std::sin(t2) * std::sin(t3)};
  return p;
}

std::array<double, 4> chart_from_unitary_params(const UnitaryParams& p) {
  const auto& a = p.axis;
  return {p.phase, std::acos(std::clamp(a[0], -1.0, 1.0)), std::atan2(std::hypot(a[2], a[3]), a[1]),
          std::atan2(a[3], a[2])};
}

UnitaryParams random_unitary_params(Rng& rng) {
  UnitaryParams p;
  double norm = 0.0;
  while (norm < 1e-12) {
    for (double& x : p.axis) x = standard_normal(rng);
    norm = std::sqrt(std::inner_product(p.axis.begin(), p.axis.end(), p.axis.begin(), 0.0));
  }
  for (double& x : p.axis) x /= norm;
  p.phase = 2.0 * std::numbers::pi * uniform01(rng);
  return p;
}

ComplexMatrix unitary_from_generator(std::span<const double> coeffs, int n) {
  if (static_cast<int>(coeffs.size()) != generator_size(n)) throw DimensionError("generator has wrong size");
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  std::size_t k = 0;
  for (int d = 0; d < n; ++d) h(d, d) = coeffs[k++];
  for (int r = 0; r < n; ++r) {
    for (int c = r + 1; c < n; ++c) {
      h(r, c) = Complex(coeffs[k], coeffs[k + 1]);
      h(c, r) = std::conj(h(r, c));
      k += 2;
    }
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h);
  const Complex i(0.0, 1.0);
  Eigen::VectorXcd phases(n);
  for (int d = 0; d < n; ++d) phases[d] = std::exp(i * eig.eigenvalues()[d]);
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

SimplexRun nelder_mead_maximize(const Objective& f, std::vector<double> start, double step, int max_iterations,
                                double tolerance) {
  const std::size_t n = start.size();
  if (n == 0) throw DimensionError("nelder_mead_maximize: empty start point");
  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;

  SimplexRun run;
  std::vector<std::vector<double>> pts(n + 1, start);
  std::vector<double> vals(n + 1);
  auto eval = [&](const std::vector<double>& x) {
    ++run.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
  };
  auto build = [&](const std::vector<double>& centre) {
    for (std::size_t i = 0; i <= n; ++i) {
      pts[i] = centre;
      if (i > 0) pts[i][i - 1] += step;
      vals[i] = eval(pts[i]);
    }
  };
  build(start);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  double cycle_best = -std::numeric_limits<double>::infinity();
  double rebuild_best = -std::numeric_limits<double>::infinity();

  for (run.iterations = 0; run.iterations < max_iterations; ++run.iterations) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
    const std::size_t best = order.front(), worst = order.back(), second_worst = order[n - 1];

    if (run.iterations % static_cast<int>(n + 1) == 0) {
      const bool flat = vals[best] - vals[worst] < tolerance;
      if (flat && vals[best] - cycle_best < tolerance) {
        if (vals[best] - rebuild_best < tolerance) {
          run.converged = true;
          break;
        }
        rebuild_best = vals[best];
        const std::vector<double> centre = pts[best];
        build(centre);
        cycle_best = -std::numeric_limits<double>::infinity();
        continue;
      }
      cycle_best = vals[best];
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t d = 0; d < n; ++d) centroid[d] += pts[i][d] / static_cast<double>(n);

    for (std::size_t d = 0; d < n; ++d) xr[d] = centroid[d] + kReflect * (centroid[d] - pts[worst][d]);
    const double fr = eval(xr);
    if (fr > vals[best]) {
      for (std::size_t d = 0; d < n; ++d) xe[d] = centroid[d] + kExpand * (xr[d] - centroid[d]);
      const double fe = eval(xe);
      if (fe > fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr > vals[second_worst]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr > vals[worst];
    const std::vector<double>& toward = outside ? xr : pts[worst];
    for (std::size_t d = 0; d < n; ++d) xc[d] = centroid[d] + kContract * (toward[d] - centroid[d]);
    const double fc = eval(xc);
    if (fc > (outside ? fr : vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t d = 0; d < n; ++d) pts[i][d] = pts[best][d] + kShrink * (pts[i][d] - pts[best][d]);
      vals[i] = eval(pts[i]);
    }
  }

  const auto it = std::max_element(vals.begin(), vals.end());
  run.best_value = *it;
  run.best_point = pts[static_cast<std::size_t>(it - vals.begin())];
  return run;
}

MultiStartRun multistart_maximize(const Objective& f, const StartSampler& sampler, const OptimizerConfig& cfg,
                                  double step) {
  cfg.validate();
  MultiStartRun out;
  out.best_value = -std::numeric_limits<double>::infinity();
  out.restart_values.reserve(cfg.restarts);
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng = derived_stream(cfg.seed, static_cast<std::uint64_t>(r));
    SimplexRun run = nelder_mead_maximize(f, sampler(rng), step, cfg.max_iterations, cfg.tolerance);
    out.evaluations += run.evaluations;
    out.restart_values.push_back(run.best_value);
    if (run.best_value > out.best_value) {
      out.best_value = run.best_value;
      out.best_point = std::move(run.best_point);
    }
  }
  return out;
}

}  // namespace delocal
