// Delocalised-interaction games: interaction, conditional operators and the
// optimal two-hypothesis answer.
//
// Question order is fixed per game. PNP: {particle (|01>+|10>)/sqrt2, no
// particle |00>}. BD: {Psi+, Phi+}. Priors follow the same order.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "delocal/qcore.hpp"

namespace delocal {

enum class GameKind { Pnp, Bd };

std::string game_label(GameKind kind);
GameKind parse_game(const std::string& label);

class GameSpec {
 public:
  /// Rejects anything other than two questions, invalid priors, and
  /// question states that differ from the canonical set for `kind`.
  GameSpec(GameKind kind, std::vector<double> priors, std::vector<PureState> questions);

  static GameSpec pnp(double p_particle = 0.5);
  static GameSpec bd(double p_psi = 0.5);

  GameKind kind() const noexcept { return kind_; }
  const std::vector<double>& priors() const noexcept { return priors_; }
  const std::vector<PureState>& questions() const noexcept { return questions_; }
  bool equal_priors() const;
  std::string question_label(int q) const;

 private:
  GameKind kind_;
  std::vector<double> priors_;
  std::vector<PureState> questions_;
};

/// Local unitaries (U_A, V_B), both d x d with d = 2, or 4 when an ancilla
/// qubit is attached to each side.
class Tactic {
 public:
  Tactic(ComplexMatrix u_a, ComplexMatrix v_b, std::string label);

  const ComplexMatrix& u_a() const noexcept { return u_a_; }
  const ComplexMatrix& v_b() const noexcept { return v_b_; }
  const std::string& label() const noexcept { return label_; }
  int local_dim() const noexcept { return static_cast<int>(u_a_.rows()); }

 private:
  ComplexMatrix u_a_;
  ComplexMatrix v_b_;
  std::string label_;
};

struct GameBounds {
  std::optional<double> concurrence_bound;  // two-qubit resource, equal priors
  std::optional<double> record_bound;       // PNP, equal priors
  double classical_limit;
};

struct GameReport {
  GameKind kind;
  std::vector<double> priors;
  double win_probability;
  std::vector<ComplexMatrix> conditional;  // sigma_z, same order as questions
  std::vector<double> no_disturb;          // Tr sigma_z
  GameBounds bounds;
  bool saturates_concurrence = false;
  bool saturates_record = false;
  std::optional<double> alternate_value;   // PNP trace-distance form, equal priors
  std::optional<double> analytic_value;    // pure-resource eigenvalue formula
  bool guessing_fallback = false;
};

/// W on (A B | A_p B_p): the |1> branch of A_p applies U_A, of B_p applies V_B.
ComplexMatrix build_interaction(const Tactic& t);

/// sigma_z = Tr_p[(I x |z><z|) W (rho x |z><z|) W^dagger], computed from the
/// full interaction.
std::vector<ComplexMatrix> conditional_operators(const DensityMatrix& rho, const Tactic& t, const GameSpec& g);

/// Operators K_z with sigma_z = K_z rho K_z^dagger. PNP: (U x I + I x V)/2 and
/// I. BD: (U x I + I x V)/2 and (U x V + I)/2.
std::vector<ComplexMatrix> kraus_operators(const Tactic& t, GameKind kind);

/// P2 Tr sigma2 + eigs+(P1 sigma1 - P2 sigma2).
double helstrom_win(const ComplexMatrix& sigma1, const ComplexMatrix& sigma2, double p1, double p2);

/// Roots 1/2 (k11 - k22 +- sqrt((k11 + k22)^2 - 4 k12 k21)) of the nonzero
/// spectrum of |a><a| - |b><b| with k the Gram entries of (a, b).
std::pair<double, double> eig_pair_formula(Complex k11, Complex k22, Complex k12, Complex k21);

double classical_limit(const GameSpec& g);

/// Full reports with internal consistency checks between routes; mismatches
/// throw InconsistencyError.
GameReport pnp_win(const DensityMatrix& rho, const Tactic& t, double p_particle = 0.5);
GameReport bd_win(const DensityMatrix& rho, const Tactic& t, double p_psi = 0.5);
GameReport play(const DensityMatrix& rho, const Tactic& t, const GameSpec& g);

/// Win probability only, for optimizer inner loops. The resource is
/// factorized once; each call costs one small QR and eigenproblem.
class WinEvaluator {
 public:
  WinEvaluator(const DensityMatrix& rho, const GameSpec& g);
  WinEvaluator(const PureState& psi, const GameSpec& g);

  double operator()(const ComplexMatrix& u_a, const ComplexMatrix& v_b) const;
  int local_dim() const noexcept { return local_dim_; }

 private:
  GameKind kind_;
  double p1_, p2_;
  int local_dim_;
  ComplexMatrix factor_;  // rho = factor * factor^dagger
};

double win_probability(const DensityMatrix& rho, const Tactic& t, const GameSpec& g);

/// Tr(m2 m2^dagger) + eigs+(m1 m1^dagger - m2 m2^dagger), via a thin QR of
/// [m1, m2].
double helstrom_win_factored(const ComplexMatrix& m1, const ComplexMatrix& m2);

}  // namespace delocal
