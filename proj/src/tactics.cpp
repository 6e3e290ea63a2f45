#include "delocal/tactics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace delocal {

namespace {

constexpr double kFormTol = 1e-10;

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

double bell_weight(const DensityMatrix& rho, Bell k) {
  const ComplexVector v = bell_state(k).amplitudes();
  return v.dot(rho.matrix() * v).real();
}

std::optional<double> werner_parameter(Bell k, const DensityMatrix& rho) {
  if (rho.dims() != Dims{2, 2}) return std::nullopt;
  const double a = std::clamp((4.0 * bell_weight(rho, k) - 1.0) / 3.0, 0.0, 1.0);
  if (max_abs_diff(rho.matrix(), werner_state(k, a).matrix()) > kFormTol) return std::nullopt;
  return a;
}

std::optional<double> two_bell_parameter(const DensityMatrix& rho) {
  if (rho.dims() != Dims{2, 2}) return std::nullopt;
  const double a = std::clamp(bell_weight(rho, Bell::PsiPlus), 0.0, 1.0);
  if (max_abs_diff(rho.matrix(), two_bell_mixture_state(a).matrix()) > kFormTol) return std::nullopt;
  return a;
}

}  // namespace

const std::vector<TacticRecipe>& recipe_catalogue() {
  static const std::vector<TacticRecipe> catalogue = {
      {Recipe::OrthogonalSchmidtFlip, "orthogonal_schmidt_flip", "pure two-qubit states",
       "PNP 3/4 + C/4, BD 1/2 + C/2"},
      {Recipe::WernerFlip, "werner_flip", "Werner-like states a|psi_k><psi_k| + (1-a) I/4",
       "PNP (1 + a)/2, the record bound"},
      {Recipe::TwoBellMixture, "two_bell_mixture", "a|psi+><psi+| + (1-a)|psi-><psi-|", "PNP 3/4 + |1 - 2a|/4"},
      {Recipe::Fef, "fef", "any two-qubit state", "BD at least the fully entangled fraction"},
      {Recipe::Identity, "identity", "any state", "guessing"},
  };
  return catalogue;
}

const TacticRecipe& recipe_info(Recipe id) {
  for (const TacticRecipe& r : recipe_catalogue())
    if (r.id == id) return r;
  throw std::logic_error("recipe missing from catalogue");
}

Recipe parse_recipe(const std::string& name) {
  for (const TacticRecipe& r : recipe_catalogue())
    if (r.name == name) return r.id;
  throw ValidationError("name", fmt::format("unknown tactic recipe '{}'", name));
}

Tactic orthogonal_schmidt_flip(const PureState& psi) {
  const Schmidt s = schmidt(psi);
  const ComplexMatrix x = pauli::x();
  return Tactic(s.basis_a * x * s.basis_a.adjoint(), s.basis_b * x * s.basis_b.adjoint(), "orthogonal_schmidt_flip");
}

Tactic werner_flip(Bell k, const DensityMatrix& rho) {
  if (!werner_parameter(k, rho))
    throw ValidationError("state", fmt::format("not a Werner-like state for {}", bell_label(k)));
  const ComplexVector v = bell_state(k).amplitudes();
  const double sign = v.dot(tensor(pauli::x(), pauli::x()) * v).real() >= 0.0 ? 1.0 : -1.0;
  return Tactic(pauli::x(), sign * pauli::x(), "werner_flip");
}

Tactic two_bell_mixture(double a) {
  if (!(a >= 0.0 && a <= 1.0)) throw ValidationError("a", fmt::format("{} is outside [0, 1]", a));
  const double sign = a <= 0.5 ? -1.0 : 1.0;
  return Tactic(pauli::x(), sign * pauli::x(), "two_bell_mixture");
}

Tactic fef_tactic(const DensityMatrix& rho) {
  const FefResult fef = fully_entangled_fraction(rho);
  const Tactic t = orthogonal_schmidt_flip(fef.state);
  return Tactic(t.u_a(), t.v_b(), "fef");
}

Tactic identity_tactic(int local_dim) {
  const ComplexMatrix id = ComplexMatrix::Identity(local_dim, local_dim);
  return Tactic(id, id, "identity");
}

Tactic build_recipe(Recipe recipe, const DensityMatrix& rho) {
  switch (recipe) {
    case Recipe::OrthogonalSchmidtFlip: {
      const auto psi = rho.dims() == Dims{2, 2} ? as_pure(rho) : std::nullopt;
      if (!psi) throw ValidationError("state", "orthogonal_schmidt_flip needs a pure two-qubit state");
      return orthogonal_schmidt_flip(*psi);
    }
    case Recipe::WernerFlip:
      for (Bell k : {Bell::PsiPlus, Bell::PsiMinus, Bell::PhiPlus, Bell::PhiMinus})
        if (werner_parameter(k, rho)) return werner_flip(k, rho);
      throw ValidationError("state", "werner_flip needs a Werner-like state");
    case Recipe::TwoBellMixture: {
      const auto a = two_bell_parameter(rho);
      if (!a) throw ValidationError("state", "two_bell_mixture needs a mixture of psi+ and psi-");
      return two_bell_mixture(*a);
    }
    case Recipe::Fef:
      if (rho.dims() != Dims{2, 2}) throw ValidationError("state", "fef needs a two-qubit state");
      return fef_tactic(rho);
    case Recipe::Identity:
      if (rho.dims().size() != 2 || rho.dims()[0] != rho.dims()[1])
        throw ValidationError("state", "identity needs a bipartite state with equal local dimensions");
      return identity_tactic(rho.dims()[0]);
  }
  throw std::logic_error("unhandled recipe");
}

GameReport evaluate(Recipe recipe, const DensityMatrix& rho, const GameSpec& game) {
  GameReport report = play(rho, build_recipe(recipe, rho), game);
  if (game.kind() == GameKind::Bd) {
    const double guess = classical_limit(game);
    if (report.win_probability < guess) {
      report.win_probability = guess;
      report.guessing_fallback = true;
      if (report.bounds.concurrence_bound)
        report.saturates_concurrence = *report.bounds.concurrence_bound - guess <= 1e-8;
    }
  }
  return report;
}

}  // namespace delocal
