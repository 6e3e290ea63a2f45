#include "delocal/games.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "delocal/measures.hpp"

namespace delocal {

namespace {

constexpr double kRouteTol = 1e-9;  // agreement between independent routes
constexpr double kSaturationTol = 1e-8;

PureState pnp_particle() { return bell_state(Bell::PsiPlus); }

void check_priors(std::span<const double> priors) {
  double sum = 0.0;
  for (double p : priors) {
    if (!(p > 0.0 && p < 1.0)) throw ValidationError("priors", fmt::format("prior {} is outside (0, 1)", p));
    sum += p;
  }
  if (std::abs(sum - 1.0) > kValidationTol) throw ValidationError("priors", fmt::format("priors sum to {}", sum));
}

void check_resource(const DensityMatrix& rho, int d) {
  if (rho.dims() != Dims{d, d})
    throw DimensionError(fmt::format("resource dims do not match a tactic with local dimension {}", d));
}

}  // namespace

std::string game_label(GameKind kind) { return kind == GameKind::Pnp ? "pnp" : "bd"; }

GameKind parse_game(const std::string& label) {
  if (label == "pnp" || label == "PNP") return GameKind::Pnp;
  if (label == "bd" || label == "BD") return GameKind::Bd;
  throw ValidationError("game", fmt::format("unknown game '{}' (expected pnp or bd)", label));
}

GameSpec::GameSpec(GameKind kind, std::vector<double> priors, std::vector<PureState> questions)
    : kind_(kind), priors_(std::move(priors)), questions_(std::move(questions)) {
  if (priors_.size() != 2 || questions_.size() != 2)
    throw ValidationError("questions", "only two-question games are supported");
  check_priors(priors_);
  const PureState expected[2] = {kind == GameKind::Pnp ? pnp_particle() : bell_state(Bell::PsiPlus),
                                 kind == GameKind::Pnp ? basis_state("00") : bell_state(Bell::PhiPlus)};
  bool entangled = false;
  for (int q = 0; q < 2; ++q) {
    if (questions_[q].dims() != Dims{2, 2} || !equal_up_to_phase(questions_[q], expected[q]))
      throw ValidationError("questions", fmt::format("question {} is not the {} question state", q, game_label(kind)));
    entangled = entangled || schmidt(questions_[q]).lambda1 > kEigenZeroTol;
  }
  if (!entangled) throw ValidationError("questions", "at least one question state must be entangled");
}

GameSpec GameSpec::pnp(double p_particle) {
  return GameSpec(GameKind::Pnp, {p_particle, 1.0 - p_particle}, {pnp_particle(), basis_state("00")});
}

GameSpec GameSpec::bd(double p_psi) {
  return GameSpec(GameKind::Bd, {p_psi, 1.0 - p_psi}, {bell_state(Bell::PsiPlus), bell_state(Bell::PhiPlus)});
}

bool GameSpec::equal_priors() const { return std::abs(priors_[0] - priors_[1]) <= kValidationTol; }

std::string GameSpec::question_label(int q) const {
  if (kind_ == GameKind::Pnp) return q == 0 ? "particle" : "no_particle";
  return q == 0 ? "psi+" : "phi+";
}

Tactic::Tactic(ComplexMatrix u_a, ComplexMatrix v_b, std::string label)
    : u_a_(std::move(u_a)), v_b_(std::move(v_b)), label_(std::move(label)) {
  if (u_a_.rows() != v_b_.rows() || (u_a_.rows() != 2 && u_a_.rows() != 4))
    throw ValidationError("tactic", "unitaries must both be 2x2 or both 4x4");
  if (!is_unitary(u_a_)) throw ValidationError("u_a", "not unitary within 1e-9");
  if (!is_unitary(v_b_)) throw ValidationError("v_b", "not unitary within 1e-9");
}

ComplexMatrix build_interaction(const Tactic& t) {
  const int d = t.local_dim();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const ComplexMatrix ua = tensor(t.u_a(), id);
  const ComplexMatrix vb = tensor(id, t.v_b());
  auto proj = [](int bits) {
    ComplexMatrix p = ComplexMatrix::Zero(4, 4);
    p(bits, bits) = 1.0;
    return p;
  };
  // Control bits are (A_p, B_p) with A_p the most significant.
  return tensor(ComplexMatrix::Identity(d * d, d * d), proj(0b00)) + tensor(ua, proj(0b10)) +
         tensor(vb, proj(0b01)) + tensor(ua * vb, proj(0b11));
}

std::vector<ComplexMatrix> conditional_operators(const DensityMatrix& rho, const Tactic& t, const GameSpec& g) {
  const int d = t.local_dim();
  check_resource(rho, d);
  const ComplexMatrix w = build_interaction(t);
  const ComplexMatrix id = ComplexMatrix::Identity(d * d, d * d);
  const Dims dims{d, d, 2, 2};
  const int keep[2] = {0, 1};
  std::vector<ComplexMatrix> out;
  for (const PureState& z : g.questions()) {
    const ComplexMatrix pz = z.projector();
    const ComplexMatrix full = tensor(id, pz) * w * tensor(rho.matrix(), pz) * w.adjoint();
    out.push_back(partial_trace(full, dims, keep));
  }
  return out;
}

std::vector<ComplexMatrix> kraus_operators(const Tactic& t, GameKind kind) {
  const int d = t.local_dim();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const ComplexMatrix ua = tensor(t.u_a(), id);
  const ComplexMatrix vb = tensor(id, t.v_b());
  const ComplexMatrix k1 = 0.5 * (ua + vb);
  if (kind == GameKind::Pnp) return {k1, ComplexMatrix::Identity(d * d, d * d)};
  return {k1, 0.5 * (ua * vb + ComplexMatrix::Identity(d * d, d * d))};
}

double helstrom_win(const ComplexMatrix& sigma1, const ComplexMatrix& sigma2, double p1, double p2) {
  const double priors[2] = {p1, p2};
  check_priors(priors);
  if (sigma1.rows() != sigma2.rows()) throw DimensionError("helstrom_win: dimension mismatch");
  return p2 * sigma2.trace().real() + positive_eig_sum(p1 * sigma1 - p2 * sigma2);
}

std::pair<double, double> eig_pair_formula(Complex k11, Complex k22, Complex k12, Complex k21) {
  // (k11 + k22)^2 - 4 k12 k21, arranged so that equal Gram entries cancel exactly.
  const Complex disc = (k11 - k22) * (k11 - k22) + 4.0 * (k11 * k22 - k12 * k21);
  const double scale = std::max(1.0, std::norm(k11) + std::norm(k22));
  if (std::abs(disc.imag()) > kValidationTol * scale || disc.real() < -kValidationTol * scale)
    throw InconsistencyError(fmt::format("eig_pair_formula: discriminant {}{:+}i is not real non-negative",
                                         disc.real(), disc.imag()));
  const double root = std::sqrt(std::max(0.0, disc.real()));
  const double centre = (k11 - k22).real();
  return {0.5 * (centre + root), 0.5 * (centre - root)};
}

double classical_limit(const GameSpec& g) {
  const double p1 = g.priors()[0], p2 = g.priors()[1];
  if (g.kind() == GameKind::Pnp) return std::max(p1, p2 + 0.5 * p1);
  return std::max(p1, p2);
}

GameReport play(const DensityMatrix& rho, const Tactic& t, const GameSpec& g) {
  const int d = t.local_dim();
  check_resource(rho, d);
  const double p1 = g.priors()[0], p2 = g.priors()[1];
  const std::vector<ComplexMatrix> ks = kraus_operators(t, g.kind());

  GameReport r{g.kind(), g.priors(), 0.0, {}, {}, {std::nullopt, std::nullopt, classical_limit(g)}};
  for (const ComplexMatrix& k : ks) {
    r.conditional.push_back(k * rho.matrix() * k.adjoint());
    r.no_disturb.push_back(r.conditional.back().trace().real());
  }
  const std::vector<ComplexMatrix> full = conditional_operators(rho, t, g);
  for (int q = 0; q < 2; ++q)
    if ((full[q] - r.conditional[q]).cwiseAbs().maxCoeff() > kRouteTol)
      throw InconsistencyError("conditional operators disagree between interaction and Kraus routes");

  r.win_probability = helstrom_win(r.conditional[0], r.conditional[1], p1, p2);

  if (g.kind() == GameKind::Pnp && g.equal_priors()) {
    const ComplexMatrix& s = r.conditional[0];
    r.alternate_value = 0.25 + 0.5 * trace_distance(s, rho.matrix()) + 0.25 * s.trace().real();
    if (std::abs(*r.alternate_value - r.win_probability) > kRouteTol)
      throw InconsistencyError(fmt::format("PNP trace-distance form {} disagrees with Helstrom value {}",
                                           *r.alternate_value, r.win_probability));
  }

  if (const auto psi = as_pure(rho)) {
    const ComplexVector a = std::sqrt(p1) * (ks[0] * psi->amplitudes());
    const ComplexVector b = std::sqrt(p2) * (ks[1] * psi->amplitudes());
    const auto [m_plus, m_minus] = eig_pair_formula(a.dot(a), b.dot(b), a.dot(b), b.dot(a));
    r.analytic_value = b.squaredNorm() + std::max(m_plus, 0.0) + std::max(m_minus, 0.0);
    if (std::abs(*r.analytic_value - r.win_probability) > kRouteTol)
      throw InconsistencyError(fmt::format("pure-state eigenvalue formula {} disagrees with Helstrom value {}",
                                           *r.analytic_value, r.win_probability));
  }

  if (g.equal_priors()) {
    if (rho.dims() == Dims{2, 2}) {
      const double c = concurrence_mixed(rho);
      r.bounds.concurrence_bound = g.kind() == GameKind::Pnp ? 0.75 + 0.25 * c : 0.5 + 0.5 * c;
    }
    if (g.kind() == GameKind::Pnp) r.bounds.record_bound = record_bound(rho);
  }
  if (r.bounds.concurrence_bound)
    r.saturates_concurrence = *r.bounds.concurrence_bound - r.win_probability <= kSaturationTol;
  if (r.bounds.record_bound) r.saturates_record = *r.bounds.record_bound - r.win_probability <= kSaturationTol;
  return r;
}

GameReport pnp_win(const DensityMatrix& rho, const Tactic& t, double p_particle) {
  return play(rho, t, GameSpec::pnp(p_particle));
}

GameReport bd_win(const DensityMatrix& rho, const Tactic& t, double p_psi) {
  return play(rho, t, GameSpec::bd(p_psi));
}

double helstrom_win_factored(const ComplexMatrix& m1, const ComplexMatrix& m2) {
  const Eigen::Index n = m1.rows(), c1 = m1.cols(), c2 = m2.cols();
  ComplexMatrix m(n, c1 + c2);
  m << m1, m2;
  Eigen::HouseholderQR<ComplexMatrix> qr(m);
  const Eigen::Index k = std::min(n, c1 + c2);
  const ComplexMatrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  ComplexMatrix signed_r = r;
  signed_r.rightCols(c2) *= -1.0;
  const ComplexMatrix h = signed_r * r.adjoint();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  double win = m2.squaredNorm();
  for (double v : eig.eigenvalues())
    if (v > kEigenZeroTol) win += v;
  return win;
}

WinEvaluator::WinEvaluator(const DensityMatrix& rho, const GameSpec& g)
    : kind_(g.kind()), p1_(g.priors()[0]), p2_(g.priors()[1]) {
  if (rho.dims().size() != 2 || rho.dims()[0] != rho.dims()[1])
    throw DimensionError("resource must be bipartite with equal local dimensions");
  local_dim_ = rho.dims()[0];
  const HermEig eig = herm_eig(rho.matrix());
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < eig.values.size(); ++k)
    if (eig.values[k] > kEigenZeroTol) keep.push_back(k);
  factor_.resize(rho.dim(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j)
    factor_.col(static_cast<Eigen::Index>(j)) = eig.vectors.col(keep[j]) * std::sqrt(eig.values[keep[j]]);
}

WinEvaluator::WinEvaluator(const PureState& psi, const GameSpec& g)
    : kind_(g.kind()), p1_(g.priors()[0]), p2_(g.priors()[1]), factor_(psi.amplitudes()) {
  if (psi.dims().size() != 2 || psi.dims()[0] != psi.dims()[1])
    throw DimensionError("resource must be bipartite with equal local dimensions");
  local_dim_ = psi.dims()[0];
}

double WinEvaluator::operator()(const ComplexMatrix& u_a, const ComplexMatrix& v_b) const {
  const int d = local_dim_;
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const ComplexMatrix ua_r = tensor(u_a, id) * factor_;
  const ComplexMatrix vb_r = tensor(id, v_b) * factor_;
  const ComplexMatrix m1 = (0.5 * std::sqrt(p1_)) * (ua_r + vb_r);
  if (kind_ == GameKind::Pnp) return helstrom_win_factored(m1, std::sqrt(p2_) * factor_);
  const ComplexMatrix uv_r = tensor(u_a, id) * vb_r;
  return helstrom_win_factored(m1, (0.5 * std::sqrt(p2_)) * (uv_r + factor_));
}

double win_probability(const DensityMatrix& rho, const Tactic& t, const GameSpec& g) {
  const WinEvaluator eval(rho, g);
  if (eval.local_dim() != t.local_dim()) throw DimensionError("tactic and resource dimensions differ");
  return eval(t.u_a(), t.v_b());
}

}  // namespace delocal
