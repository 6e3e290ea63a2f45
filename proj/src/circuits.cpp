#include "delocal/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "delocal/random.hpp"

namespace delocal {

namespace {

constexpr int kQubits = 4;
constexpr int kDim = 16;

int bit(int index, int q) { return (index >> (kQubits - 1 - q)) & 1; }
int flip(int index, int q) { return index ^ (1 << (kQubits - 1 - q)); }

// Permutation gates act on basis indices directly.
ComplexMatrix permutation(GateKind kind, int a, int b) {
  ComplexMatrix m = ComplexMatrix::Zero(kDim, kDim);
  for (int i = 0; i < kDim; ++i) {
    int j = i;
    if (kind == GateKind::X) j = flip(i, a);
    if (kind == GateKind::CX && bit(i, a)) j = flip(i, b);
    if (kind == GateKind::Swap && bit(i, a) != bit(i, b)) j = flip(flip(i, a), b);
    m(j, i) = 1.0;
  }
  return m;
}

ComplexMatrix single_qubit(const ComplexMatrix& g, int q) { return embed_operator(g, {2, 2, 2, 2}, q); }

ComplexMatrix gate_unitary(const Gate& g) {
  if (g.kind == GateKind::H) {
    ComplexMatrix h(2, 2);
    h << 1.0, 1.0, 1.0, -1.0;
    return single_qubit(h / std::sqrt(2.0), g.a);
  }
  return permutation(g.kind, g.a, g.b);
}

// (1 - p) rho + p/4^k sum_P P rho P over all Paulis on the support.
ComplexMatrix depolarize(const ComplexMatrix& rho, const std::vector<int>& support, double p) {
  if (p == 0.0) return rho;
  const ComplexMatrix paulis[4] = {pauli::identity(), pauli::x(), pauli::y(), pauli::z()};
  const int k = static_cast<int>(support.size());
  const int terms = 1 << (2 * k);
  ComplexMatrix mixed = ComplexMatrix::Zero(kDim, kDim);
  for (int t = 0; t < terms; ++t) {
    ComplexMatrix op = ComplexMatrix::Identity(kDim, kDim);
    for (int s = 0; s < k; ++s) op = single_qubit(paulis[(t >> (2 * s)) & 3], support[s]) * op;
    mixed += op * rho * op.adjoint();
  }
  return (1.0 - p) * rho + (p / terms) * mixed;
}

std::array<int, 2> question_code(Question q) {
  if (q == Question::PsiPlus) return {0, 1};
  return {0, 0};
}

int question_index(GameKind game, Question q) {
  const auto qs = game_questions(game);
  for (int i = 0; i < 2; ++i)
    if (qs[i] == q) return i;
  throw ValidationError("question", fmt::format("{} is not a {} question", question_label(q), game_label(game)));
}

double classical_for(GameKind game, std::span<const double> priors) {
  const GameSpec g = game == GameKind::Pnp ? GameSpec::pnp(priors[0]) : GameSpec::bd(priors[0]);
  return classical_limit(g);
}

}  // namespace

std::string resource_label(Resource r) { return r == Resource::Entangled ? "entangled" : "separable"; }

std::string question_label(Question q) {
  switch (q) {
    case Question::PhiPlus: return "phi+";
    case Question::PsiPlus: return "psi+";
    case Question::Zero: return "00";
  }
  return "?";
}

Question parse_question(const std::string& label) {
  if (label == "phi+" || label == "Phi+") return Question::PhiPlus;
  if (label == "psi+" || label == "Psi+") return Question::PsiPlus;
  if (label == "00" || label == "zero") return Question::Zero;
  throw ValidationError("question", fmt::format("unknown question '{}'", label));
}

std::string gate_label(GateKind g) {
  switch (g) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::CX: return "CX";
    case GateKind::Swap: return "SWAP";
    case GateKind::MeasureAll: return "MEASURE_ALL";
  }
  return "?";
}

std::string stage_label(Stage s) {
  switch (s) {
    case Stage::AbPrep: return "ab_prep";
    case Stage::CPrep: return "c_prep";
    case Stage::Interaction: return "interaction";
    case Stage::Measurement: return "measurement";
  }
  return "?";
}

std::array<Question, 2> game_questions(GameKind game) {
  if (game == GameKind::Pnp) return {Question::PsiPlus, Question::Zero};
  return {Question::PsiPlus, Question::PhiPlus};
}

Circuit build_circuit(GameKind game, Question question, Resource resource) {
  question_index(game, question);
  Circuit c{game, question, resource, {}};
  auto add = [&](GateKind k, int a, int b, Stage s) { c.gates.push_back({k, a, b, s}); };
  if (resource == Resource::Entangled) {
    add(GateKind::H, 1, -1, Stage::AbPrep);
    add(GateKind::CX, 1, 2, Stage::AbPrep);
    add(GateKind::Swap, 1, 0, Stage::AbPrep);
    add(GateKind::Swap, 2, 3, Stage::AbPrep);
  }
  const bool entangled_question = question != Question::Zero;
  if (entangled_question) {
    add(GateKind::H, 1, -1, Stage::CPrep);
    add(GateKind::CX, 1, 2, Stage::CPrep);
    if (question == Question::PsiPlus) add(GateKind::X, 1, -1, Stage::CPrep);
  }
  add(GateKind::CX, 1, 0, Stage::Interaction);
  add(GateKind::CX, 2, 3, Stage::Interaction);
  if (entangled_question) {
    add(GateKind::CX, 1, 2, Stage::Measurement);
    add(GateKind::H, 1, -1, Stage::Measurement);
  }
  add(GateKind::MeasureAll, -1, -1, Stage::Measurement);
  return c;
}

void NoiseModel::validate() const {
  const std::pair<const char*, double> fields[3] = {{"p1", p1}, {"p2", p2}, {"pm", pm}};
  for (const auto& [name, v] : fields)
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(name, fmt::format("{} is outside [0, 1]", v));
}

ComplexMatrix simulate_state(const Circuit& c, const NoiseModel& noise) {
  noise.validate();
  ComplexMatrix rho = ComplexMatrix::Zero(kDim, kDim);
  rho(0, 0) = 1.0;
  for (const Gate& g : c.gates) {
    if (g.kind == GateKind::MeasureAll) break;
    const ComplexMatrix u = gate_unitary(g);
    rho = u * rho * u.adjoint();
    const bool two = g.kind == GateKind::CX || g.kind == GateKind::Swap;
    rho = two ? depolarize(rho, {g.a, g.b}, noise.p2) : depolarize(rho, {g.a}, noise.p1);
  }
  return rho;
}

Distribution simulate(const Circuit& c, const NoiseModel& noise) {
  const ComplexMatrix rho = simulate_state(c, noise);
  Distribution p{};
  for (int i = 0; i < kDim; ++i) p[i] = std::max(0.0, rho(i, i).real());
  for (int q = 0; q < kQubits; ++q) {
    Distribution next{};
    for (int i = 0; i < kDim; ++i) next[i] = (1.0 - noise.pm) * p[i] + noise.pm * p[flip(i, q)];
    p = next;
  }
  return p;
}

Counts sample_counts(const Distribution& dist, long shots, std::uint64_t seed, std::uint64_t stream_id) {
  if (shots <= 0) throw ValidationError("shots", "must be positive");
  Distribution cdf{};
  double acc = 0.0;
  for (int i = 0; i < kDim; ++i) cdf[i] = (acc += dist[i]);
  Rng rng = derived_stream(seed, stream_id);
  Counts counts{};
  for (long s = 0; s < shots; ++s) {
    const double u = uniform01(rng) * acc;
    int i = static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    i = std::min(i, kDim - 1);
    ++counts[i];
  }
  return counts;
}

bool check_passes(int outcome, Question question) {
  const auto code = question_code(question);
  return bit(outcome, 1) == code[0] && bit(outcome, 2) == code[1];
}

double score(const Distribution& dist, GameKind game, Question question, const AnswerRule& rule) {
  const int want = question_index(game, question);
  double win = 0.0;
  for (int i = 0; i < kDim; ++i)
    if (check_passes(i, question) && rule[2 * bit(i, 0) + bit(i, 3)] == want) win += dist[i];
  return win;
}

double score(const Counts& counts, GameKind game, Question question, const AnswerRule& rule) {
  long total = 0;
  for (long n : counts) total += n;
  if (total <= 0) throw ValidationError("counts", "no shots recorded");
  Distribution p{};
  for (int i = 0; i < kDim; ++i) {
    if (counts[i] < 0) throw ValidationError("counts", "negative count");
    p[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return score(p, game, question, rule);
}

AnswerRule answer_rule(GameKind game, Resource resource, std::span<const double> priors) {
  if (resource == Resource::Entangled) return {1, 0, 0, 1};  // parity 1 -> first question
  const auto qs = game_questions(game);
  Distribution dist[2];
  for (int z = 0; z < 2; ++z) dist[z] = simulate(build_circuit(game, qs[z], resource), NoiseModel{});
  AnswerRule best{};
  double best_total = -1.0;
  for (int map = 0; map < 16; ++map) {
    AnswerRule rule;
    for (int k = 0; k < 4; ++k) rule[k] = (map >> (3 - k)) & 1;
    double total = 0.0;
    for (int z = 0; z < 2; ++z) total += priors[z] * score(dist[z], game, qs[z], rule);
    if (total > best_total + 1e-12) {
      best_total = total;
      best = rule;
    }
  }
  return best;
}

DemoReport run_demo(GameKind game, const NoiseModel& noise, long shots, std::uint64_t seed,
                    std::span<const double> priors) {
  noise.validate();
  if (shots < 0) throw ValidationError("shots", "must be non-negative");
  if (priors.size() != 2) throw ValidationError("priors", "expected two priors");
  DemoReport report{game, {priors.begin(), priors.end()}, noise, shots, seed, {}, 0.0, 0.0,
                    classical_for(game, priors)};
  const auto qs = game_questions(game);
  for (Resource res : {Resource::Entangled, Resource::Separable}) {
    const AnswerRule rule = answer_rule(game, res, priors);
    double total = 0.0;
    const std::size_t first = report.rows.size();
    for (int z = 0; z < 2; ++z) {
      const Distribution dist = simulate(build_circuit(game, qs[z], res), noise);
      const std::uint64_t stream = static_cast<std::uint64_t>(game == GameKind::Pnp ? 0 : 4) +
                                   (res == Resource::Entangled ? 0 : 2) + static_cast<std::uint64_t>(z);
      const double win = shots > 0 ? score(sample_counts(dist, shots, seed, stream), game, qs[z], rule)
                                   : score(dist, game, qs[z], rule);
      report.rows.push_back({res, qs[z], win, 0.0});
      total += priors[z] * win;
    }
    for (std::size_t r = first; r < report.rows.size(); ++r) report.rows[r].total_win = total;
    (res == Resource::Entangled ? report.total_entangled : report.total_separable) = total;
  }
  return report;
}

void write_demo_csv(std::ostream& out, const DemoReport& report) {
  out << "# outcome bit order: q0 most significant\n";
  out << "resource,question,per_question_win,total_win,classical_limit\n";
  for (const DemoRow& r : report.rows)
    out << fmt::format("{},{},{:.17g},{:.17g},{:.17g}\n", resource_label(r.resource), question_label(r.question),
                       r.per_question_win, r.total_win, report.classical_limit);
}

}  // namespace delocal
