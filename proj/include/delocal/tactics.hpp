// Analytic tactics with known win probabilities.
#pragma once

#include <string>
#include <vector>

#include "delocal/games.hpp"
#include "delocal/measures.hpp"

namespace delocal {

enum class Recipe { OrthogonalSchmidtFlip, WernerFlip, TwoBellMixture, Fef, Identity };

struct TacticRecipe {
  Recipe id;
  std::string name;
  std::string applies_to;
  std::string expected;
};

const std::vector<TacticRecipe>& recipe_catalogue();
const TacticRecipe& recipe_info(Recipe id);
Recipe parse_recipe(const std::string& name);

/// X in the local Schmidt frames: U_A = A X A^dagger, V_B = B X B^dagger.
Tactic orthogonal_schmidt_flip(const PureState& psi);

/// U_A = X, V_B = s X with s = <psi_k| X x X |psi_k>. Throws ValidationError
/// when rho is not a Werner-like state for k.
Tactic werner_flip(Bell k, const DensityMatrix& rho);

/// U_A = X with V_B = -X for a <= 1/2 and V_B = X otherwise.
Tactic two_bell_mixture(double a);

/// orthogonal_schmidt_flip of the maximally entangled state closest to rho.
Tactic fef_tactic(const DensityMatrix& rho);

Tactic identity_tactic(int local_dim = 2);

/// Builds the recipe for rho and plays it. Throws ValidationError when the
/// recipe does not apply. In BD the reported win is never below the guessing
/// value; guessing_fallback records when that floor was used.
GameReport evaluate(Recipe recipe, const DensityMatrix& rho, const GameSpec& game);

/// Tactic a recipe would use for rho (same applicability rules as evaluate).
Tactic build_recipe(Recipe recipe, const DensityMatrix& rho);

}  // namespace delocal
