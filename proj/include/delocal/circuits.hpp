// Noisy density-matrix simulation of the four-qubit demonstration circuits.
//
// Qubits: q0 = A, q1 = A_p, q2 = B_p, q3 = B. q0 is the most significant bit
// of every outcome index. The resource preparation H q1, CX q1 q2, SWAP q1 q0,
// SWAP q2 q3 leaves (q0, q3) in Phi+, which X x X fixes, so after the CX
// interaction parity q0 xor q3 = 1 signals the entangled question (particle
// in PNP, Psi+ in BD) and parity 0 signals the other one.
#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "delocal/games.hpp"

namespace delocal {

enum class GateKind { H, X, CX, Swap, MeasureAll };
enum class Stage { AbPrep, CPrep, Interaction, Measurement };
enum class Resource { Entangled, Separable };
enum class Question { PhiPlus, PsiPlus, Zero };

std::string resource_label(Resource r);
std::string question_label(Question q);
std::string gate_label(GateKind g);
std::string stage_label(Stage s);
Question parse_question(const std::string& label);

struct Gate {
  GateKind kind;
  int a = -1;  // target for single-qubit gates, control for CX
  int b = -1;  // target for CX
  Stage stage;
};

struct Circuit {
  GameKind game;
  Question question;
  Resource resource;
  std::vector<Gate> gates;  // ends with a single MeasureAll
};

/// The questions of a game in game order (PNP: Psi+ then |00>; BD: Psi+
/// then Phi+).
std::array<Question, 2> game_questions(GameKind game);

/// Throws ValidationError when the question does not belong to the game.
Circuit build_circuit(GameKind game, Question question, Resource resource);

struct NoiseModel {
  double p1 = 0.0;  // depolarizing after each single-qubit gate
  double p2 = 0.0;  // depolarizing after each two-qubit gate (SWAP included)
  double pm = 0.0;  // readout bit flip per qubit

  void validate() const;
  /// Illustrative values, not calibrated to any device.
  static NoiseModel reference() { return {0.015, 0.03, 0.025}; }
};

using Distribution = std::array<double, 16>;
using Counts = std::array<long, 16>;

/// Exact evolution of the 16 x 16 density matrix followed by readout flips.
Distribution simulate(const Circuit& c, const NoiseModel& noise);

/// Final state before readout, for inspection.
ComplexMatrix simulate_state(const Circuit& c, const NoiseModel& noise);

/// Inverse-CDF multinomial sampling on the stream (seed, stream_id).
Counts sample_counts(const Distribution& dist, long shots, std::uint64_t seed, std::uint64_t stream_id);

/// Answer (question index in game order) for each (q0, q3) readout pair,
/// indexed 2 q0 + q3.
using AnswerRule = std::array<int, 4>;

/// Entangled resource: the parity rule. Separable resource: the best of the
/// 16 deterministic maps on the noiseless distributions under the priors
/// (ties go to the lowest map index).
AnswerRule answer_rule(GameKind game, Resource resource, std::span<const double> priors);

/// True when C's check passes for the question: decoded (q1, q2) equals the
/// question's code (Phi+ and |00> -> 00, Psi+ -> 01).
bool check_passes(int outcome, Question question);

/// Probability that C's check passes and the answer is right.
double score(const Distribution& dist, GameKind game, Question question, const AnswerRule& rule);
double score(const Counts& counts, GameKind game, Question question, const AnswerRule& rule);

struct DemoRow {
  Resource resource;
  Question question;
  double per_question_win;
  double total_win;
};

struct DemoReport {
  GameKind game;
  std::vector<double> priors;
  NoiseModel noise;
  long shots;  // 0 means exact distributions
  std::uint64_t seed;
  std::vector<DemoRow> rows;  // entangled rows first, questions in game order
  double total_entangled;
  double total_separable;
  double classical_limit;
};

/// All circuits for both resources. shots = 0 scores exact distributions.
DemoReport run_demo(GameKind game, const NoiseModel& noise, long shots, std::uint64_t seed,
                    std::span<const double> priors);

void write_demo_csv(std::ostream& out, const DemoReport& report);

}  // namespace delocal
