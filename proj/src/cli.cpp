#include "delocal/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "delocal/circuits.hpp"
#include "delocal/games.hpp"
#include "delocal/inequalities.hpp"
#include "delocal/measures.hpp"
#include "delocal/optimizer.hpp"
#include "delocal/random.hpp"
#include "delocal/state_io.hpp"
#include "delocal/tactics.hpp"

namespace delocal {

using nlohmann::json;

namespace {

struct Options {
  std::string state;
  std::string tactic;
  std::string game = "pnp";
  std::string name;
  std::string out;
  std::string what;
  std::string params;
  double pp = 0.5;
  double step = 0.01;
  double p1 = NoiseModel::reference().p1;
  double p2 = NoiseModel::reference().p2;
  double pm = NoiseModel::reference().pm;
  long shots = 8192;
  int restarts = 32;
  int max_iterations = 2000;
  std::uint64_t seed = 0;
  bool ancilla = false;
  bool separable = false;
  bool with_g = false;
};

json complex_matrix_json(const ComplexMatrix& m) { return json::parse(matrix_to_json(m)); }

json config_json(const Options& o, const OptimizerConfig* cfg) {
  json c = {{"version", kVersion},
            {"seed", o.seed},
            {"tolerances",
             {{"validation", kValidationTol},
              {"eigen_zero", kEigenZeroTol},
              {"unitary", kUnitaryTol},
              {"saturation", 1e-8},
              {"constraint", kConstraintTol}}}};
  if (cfg)
    c["optimizer"] = {{"restarts", cfg->restarts},
                      {"max_iterations", cfg->max_iterations},
                      {"tolerance", cfg->tolerance},
                      {"dimension", cfg->dimension}};
  return c;
}

OptimizerConfig optimizer_config(const Options& o, int dimension) {
  OptimizerConfig cfg;
  cfg.restarts = o.restarts;
  cfg.max_iterations = o.max_iterations;
  cfg.seed = o.seed;
  cfg.dimension = dimension;
  if (cfg.restarts <= 0) throw ValidationError("--restarts", "must be positive");
  if (cfg.max_iterations <= 0) throw ValidationError("--max-iterations", "must be positive");
  return cfg;
}

GameSpec game_spec(const Options& o) {
  const GameKind kind = parse_game(o.game);
  if (!(o.pp > 0.0 && o.pp < 1.0)) throw ValidationError("--pp", fmt::format("{} is outside (0, 1)", o.pp));
  return kind == GameKind::Pnp ? GameSpec::pnp(o.pp) : GameSpec::bd(o.pp);
}

DensityMatrix require_state(const Options& o) {
  if (o.state.empty()) throw ValidationError("--state", "a state file or shorthand is required");
  try {
    return as_density(load_state(o.state));
  } catch (const ValidationError& e) {
    throw ValidationError("--state", e.what());
  }
}

ComplexMatrix named_qubit_unitary(const std::string& label, const char* field) {
  std::string body = label;
  double sign = 1.0;
  if (!body.empty() && body[0] == '-') {
    sign = -1.0;
    body = body.substr(1);
  }
  if (body == "i" || body == "identity") return sign * pauli::identity();
  if (body == "x") return sign * pauli::x();
  if (body == "y") return sign * pauli::y();
  if (body == "z") return sign * pauli::z();
  if (body == "h") {
    ComplexMatrix h(2, 2);
    h << 1.0, 1.0, 1.0, -1.0;
    return sign * h / std::sqrt(2.0);
  }
  throw ValidationError(field, fmt::format("unknown unitary '{}' (use i, x, y, z, h, optionally with '-')", label));
}

Tactic resolve_tactic(const std::string& spec, const DensityMatrix& rho) {
  if (spec.empty()) throw ValidationError("--tactic", "a tactic file or name is required");
  std::error_code ec;
  if (std::filesystem::is_regular_file(spec, ec)) return read_tactic_file(spec);
  const int d = rho.dims().empty() ? 2 : rho.dims()[0];
  if (spec == "identity") return identity_tactic(d);
  if (spec == "flip") return Tactic(pauli::x(), pauli::x(), "flip");
  try {
    return build_recipe(parse_recipe(spec), rho);
  } catch (const ValidationError& e) {
    throw ValidationError("--tactic", e.what());
  }
}

std::map<std::string, std::string> parse_params(const std::string& text, std::initializer_list<const char*> allowed) {
  std::map<std::string, std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("--params", fmt::format("'{}' is not key=value", item));
    const std::string key = item.substr(0, eq);
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ValidationError("--params", fmt::format("unknown parameter '{}'", key));
    out[key] = item.substr(eq + 1);
  }
  return out;
}

double param_double(const std::map<std::string, std::string>& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  if (it == p.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(it->second);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(key, fmt::format("'{}' is not a number", it->second));
  }
}

std::string param_string(const std::map<std::string, std::string>& p, const std::string& key,
                         const std::string& fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json tactic_json(const Tactic& t) { return json::parse(tactic_to_json(t)); }

json game_report_json(const GameReport& r) {
  json conditional = json::array();
  for (const ComplexMatrix& s : r.conditional) conditional.push_back(complex_matrix_json(s));
  return {{"game", game_label(r.kind)},
          {"priors", r.priors},
          {"win_probability", r.win_probability},
          {"no_disturb", r.no_disturb},
          {"conditional_operators", conditional},
          {"bounds",
           {{"concurrence_bound", optional_json(r.bounds.concurrence_bound)},
            {"record_bound", optional_json(r.bounds.record_bound)},
            {"classical_limit", r.bounds.classical_limit}}},
          {"saturates", {{"concurrence_bound", r.saturates_concurrence}, {"record_bound", r.saturates_record}}},
          {"alternate_value", optional_json(r.alternate_value)},
          {"analytic_value", optional_json(r.analytic_value)},
          {"guessing_fallback", r.guessing_fallback}};
}

json state_json(const State& s) { return json::parse(state_to_json(s)); }

void emit(std::ostream& out, const json& report) { out << report.dump(2) << "\n"; }

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) throw ValidationError("--out", "an output path is required");
  write_text_file(path, text);
}

// --- verbs -------------------------------------------------------------------

void cmd_measure(const Options& o, std::ostream& out) {
  const OptimizerConfig cfg = optimizer_config(o, 2);
  const State state = load_state(o.state.empty() ? throw ValidationError("--state", "required") : o.state);
  const MeasureReport m = measure(state, cfg, o.with_g);
  emit(out, {{"command", "measure"},
             {"config", config_json(o, o.with_g ? &cfg : nullptr)},
             {"state", o.state},
             {"concurrence", m.concurrence},
             {"entropy", optional_json(m.entropy)},
             {"fef", m.fef},
             {"fef_state", state_json(m.fef_state)},
             {"g", optional_json(m.g)},
             {"record_bound", m.record_bound}});
}

void cmd_play(const Options& o, std::ostream& out) {
  const DensityMatrix rho = require_state(o);
  const Tactic t = resolve_tactic(o.tactic, rho);
  const GameReport r = play(rho, t, game_spec(o));
  json report = {{"command", "play"}, {"config", config_json(o, nullptr)}, {"state", o.state},
                 {"tactic", tactic_json(t)}};
  report["report"] = game_report_json(r);
  emit(out, report);
}

void cmd_tactic(const Options& o, std::ostream& out) {
  const DensityMatrix rho = require_state(o);
  Recipe recipe;
  try {
    recipe = parse_recipe(o.name);
  } catch (const ValidationError& e) {
    throw ValidationError("--name", e.what());
  }
  const Tactic t = [&] {
    try {
      return build_recipe(recipe, rho);
    } catch (const ValidationError& e) {
      throw ValidationError("--state", e.what());
    }
  }();
  const GameReport r = evaluate(recipe, rho, game_spec(o));
  const TacticRecipe& info = recipe_info(recipe);
  emit(out, {{"command", "tactic"},
             {"config", config_json(o, nullptr)},
             {"recipe", {{"name", info.name}, {"applies_to", info.applies_to}, {"expected", info.expected}}},
             {"tactic", tactic_json(t)},
             {"predicted_win", r.win_probability},
             {"report", game_report_json(r)}});
}

void cmd_optimize(const Options& o, std::ostream& out) {
  const OptimizerConfig cfg = optimizer_config(o, o.ancilla ? 4 : 2);
  const GameSpec game = game_spec(o);
  OptimizationResult r = [&] {
    if (o.separable) return optimize_separable(game, cfg);
    return optimize(require_state(o), game, cfg);
  }();
  json report = {{"command", "optimize"},
                 {"config", config_json(o, &cfg)},
                 {"game", game_label(game.kind())},
                 {"priors", game.priors()},
                 {"state", o.separable ? json("separable search") : json(o.state)},
                 {"best_value", r.best_value},
                 {"best_tactic", tactic_json(r.best_tactic)},
                 {"restart_values", r.restart_values},
                 {"evaluations", r.evaluations},
                 {"classical_limit", classical_limit(game)}};
  if (r.best_state) report["best_state"] = state_json(*r.best_state);
  emit(out, report);
}

void cmd_sweep(const Options& o, std::ostream& out) {
  if (o.what != "werner") throw ValidationError("family", fmt::format("unknown sweep '{}' (expected werner)", o.what));
  const OptimizerConfig cfg = optimizer_config(o, o.ancilla ? 4 : 2);
  if (o.out.empty()) throw ValidationError("--out", "an output path is required");
  const std::vector<SweepRow> rows = werner_sweep(o.ancilla ? SweepKind::WithAncilla : SweepKind::Bare, o.step, cfg);
  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  write_output(o.out, csv.str());
  emit(out, {{"command", "sweep"},
             {"config", config_json(o, &cfg)},
             {"family", "werner"},
             {"ancilla", o.ancilla},
             {"step", o.step},
             {"rows", rows.size()},
             {"out", o.out}});
}

void cmd_check(const Options& o, std::ostream& out) {
  json report = {{"command", "check"}, {"check", o.what}};
  if (o.what == "lemma1") {
    const auto p = parse_params(o.params, {"dim", "pairs"});
    const int dim = static_cast<int>(param_double(p, "dim", 4));
    const int pairs = static_cast<int>(param_double(p, "pairs", 1000));
    if (dim < 2 || dim > 16) throw ValidationError("dim", "must lie in [2, 16]");
    if (pairs <= 0) throw ValidationError("pairs", "must be positive");
    double min_slack = std::numeric_limits<double>::infinity();
    bool all_hold = true;
    for (int i = 0; i < pairs; ++i) {
      Rng rng = derived_stream(o.seed, static_cast<std::uint64_t>(i));
      const DensityMatrix rho = random_density({dim}, rng), sigma = random_density({dim}, rng);
      const InequalityReport r = lemma1_check(rho, sigma);
      min_slack = std::min(min_slack, r.slack);
      all_hold = all_hold && r.holds;
    }
    report.update({{"dim", dim}, {"pairs", pairs}, {"min_slack", min_slack}, {"all_hold", all_hold}});
  } else if (o.what == "tdineq") {
    const auto p = parse_params(o.params, {"u", "v"});
    const DensityMatrix rho = require_state(o);
    const InequalityReport r = td_inequality(rho, named_qubit_unitary(param_string(p, "u", "x"), "u"),
                                             named_qubit_unitary(param_string(p, "v", "x"), "v"));
    report.update({{"state", o.state}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"slack", r.slack}, {"holds", r.holds}});
  } else if (o.what == "werner-scan") {
    const auto p = parse_params(o.params, {"step", "restarts"});
    Options scan_opts = o;
    scan_opts.restarts = static_cast<int>(param_double(p, "restarts", 64));
    const OptimizerConfig cfg = optimizer_config(scan_opts, 2);
    const ViolationScan scan = werner_violation_scan(param_double(p, "step", 0.01), cfg);
    if (!o.out.empty()) {
      std::string csv = "a,max_excess\n";
      for (std::size_t i = 0; i < scan.a.size(); ++i) csv += fmt::format("{:.17g},{:.17g}\n", scan.a[i], scan.max_excess[i]);
      write_output(o.out, csv);
    }
    report["config"] = config_json(o, &cfg);
    report.update({{"threshold", optional_json(scan.threshold)},
                   {"violation_tolerance", kViolationTol},
                   {"a", scan.a},
                   {"max_excess", scan.max_excess}});
  } else if (o.what == "sa") {
    const auto p = parse_params(o.params, {"rho00", "rho01", "rho01_im"});
    const SAState s = SAState::two_qubit(param_double(p, "rho00", 0.5),
                                         Complex(param_double(p, "rho01", 0.0), param_double(p, "rho01_im", 0.0)));
    const SaOptimum r = sa_pnp2_optimum(s);
    report.update({{"max_trace_distance", r.max_trace_distance},
                   {"concurrence", r.concurrence},
                   {"phase_scan_max", r.phase_scan_max},
                   {"pnp2_win", r.pnp2_win}});
  } else if (o.what == "conditioned") {
    const auto p = parse_params(o.params, {"variant", "u", "v"});
    const DensityMatrix rho = require_state(o);
    const Tactic t(named_qubit_unitary(param_string(p, "u", "x"), "u"),
                   named_qubit_unitary(param_string(p, "v", "x"), "v"), "params");
    const ConditionedReport r = conditioned_game_check(parse_conditioned_variant(param_string(p, "variant", "pnp1")), rho, t);
    report.update({{"state", o.state},
                   {"variant", conditioned_label(r.variant)},
                   {"objective", r.objective},
                   {"constraint_residual", r.constraint_residual},
                   {"classical_limit", r.classical_limit}});
  } else {
    throw ValidationError("check", fmt::format("unknown check '{}' (lemma1, tdineq, werner-scan, sa, conditioned)", o.what));
  }
  if (!report.contains("config")) report["config"] = config_json(o, nullptr);
  emit(out, report);
}

void cmd_demo(const Options& o, std::ostream& out) {
  const GameSpec game = game_spec(o);
  const NoiseModel noise{o.p1, o.p2, o.pm};
  try {
    noise.validate();
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    throw ValidationError("--" + e.field(), msg.substr(e.field().size() + 2));
  }
  if (o.shots < 0) throw ValidationError("--shots", "must be non-negative");
  const DemoReport r = run_demo(game.kind(), noise, o.shots, o.seed, game.priors());
  if (!o.out.empty()) {
    std::ostringstream csv;
    write_demo_csv(csv, r);
    write_output(o.out, csv.str());
  }
  json rows = json::array();
  for (const DemoRow& row : r.rows)
    rows.push_back({{"resource", resource_label(row.resource)},
                    {"question", question_label(row.question)},
                    {"per_question_win", row.per_question_win},
                    {"total_win", row.total_win}});
  json annotations = {{"reference_noise_is_calibrated", false}};
  if (game.kind() == GameKind::Bd) {
    annotations["hardware_reference_total"] = 0.71;
    annotations["usable_concurrence"] = 2.0 * (r.total_entangled - 0.5);
    annotations["hardware_reference_usable_concurrence"] = 0.42;
  } else {
    annotations["hardware_reference_total"] = 0.72;
    annotations["hardware_reference_priors"] = {2.0 / 3.0, 1.0 / 3.0};
  }
  emit(out, {{"command", "demo"},
             {"config", config_json(o, nullptr)},
             {"game", game_label(r.game)},
             {"priors", r.priors},
             {"noise", {{"p1", noise.p1}, {"p2", noise.p2}, {"pm", noise.pm}}},
             {"shots", r.shots},
             {"outcome_bit_order", "q0 most significant"},
             {"rows", rows},
             {"total_entangled", r.total_entangled},
             {"total_separable", r.total_separable},
             {"classical_limit", r.classical_limit},
             {"annotations", annotations}});
}

std::uint64_t default_seed() {
  const char* env = std::getenv(kSeedEnv);
  if (!env || !*env) return 0;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument(env);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(kSeedEnv, fmt::format("'{}' is not an unsigned integer", env));
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Delocalised-interaction games: win probabilities, bounds and circuit simulation", "delocal"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", kVersion);

  auto add_seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "PRNG seed (default $" + std::string(kSeedEnv) + " or 0)"); };
  auto add_opt = [&](CLI::App* c) {
    c->add_option("--restarts", o.restarts, "optimizer restarts");
    c->add_option("--max-iterations", o.max_iterations, "simplex iterations per restart");
  };

  CLI::App* measure_cmd = app.add_subcommand("measure", "entanglement measures of a two-qubit state");
  measure_cmd->add_option("--state", o.state, "state file or shorthand")->required();
  measure_cmd->add_flag("--g", o.with_g, "also maximize the G quantity (pure states)");
  add_seed(measure_cmd);
  add_opt(measure_cmd);

  CLI::App* play_cmd = app.add_subcommand("play", "win probability of a tactic");
  play_cmd->add_option("--game", o.game, "pnp or bd")->required();
  play_cmd->add_option("--state", o.state, "state file or shorthand")->required();
  play_cmd->add_option("--tactic", o.tactic, "tactic file, identity, flip, or a recipe name")->required();
  play_cmd->add_option("--pp", o.pp, "prior of the first question (PNP particle, BD psi+)");

  CLI::App* tactic_cmd = app.add_subcommand("tactic", "build an analytic tactic and predict its win probability");
  tactic_cmd->add_option("--name", o.name, "recipe name")->required();
  tactic_cmd->add_option("--state", o.state, "state file or shorthand")->required();
  tactic_cmd->add_option("--game", o.game, "pnp or bd");
  tactic_cmd->add_option("--pp", o.pp, "prior of the first question");

  CLI::App* optimize_cmd = app.add_subcommand("optimize", "maximize the win probability over local unitaries");
  optimize_cmd->add_option("--game", o.game, "pnp or bd")->required();
  optimize_cmd->add_option("--state", o.state, "state file or shorthand");
  optimize_cmd->add_option("--pp", o.pp, "prior of the first question");
  optimize_cmd->add_flag("--ancilla", o.ancilla, "attach |00> and optimize over U(4) x U(4)");
  optimize_cmd->add_flag("--separable", o.separable, "search pure product resources instead of --state");
  add_seed(optimize_cmd);
  add_opt(optimize_cmd);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "optimized PNP win probability across Werner states");
  sweep_cmd->add_option("family", o.what, "werner")->required();
  sweep_cmd->add_flag("--ancilla", o.ancilla, "attach |00> and optimize over U(4) x U(4)");
  sweep_cmd->add_option("--step", o.step, "grid step on a");
  sweep_cmd->add_option("--out", o.out, "CSV output path")->required();
  add_seed(sweep_cmd);
  add_opt(sweep_cmd);

  CLI::App* check_cmd = app.add_subcommand("check", "inequality and identity checks");
  check_cmd->add_option("check", o.what, "lemma1, tdineq, werner-scan, sa or conditioned")->required();
  check_cmd->add_option("--params", o.params, "key=value,...");
  check_cmd->add_option("--state", o.state, "state file or shorthand");
  check_cmd->add_option("--out", o.out, "CSV output path (werner-scan)");
  add_seed(check_cmd);
  check_cmd->add_option("--max-iterations", o.max_iterations, "simplex iterations per restart");

  CLI::App* demo_cmd = app.add_subcommand("demo", "simulate the demonstration circuits");
  demo_cmd->add_option("--game", o.game, "pnp or bd")->required();
  demo_cmd->add_option("--pp", o.pp, "prior of the first question");
  demo_cmd->add_option("--p1", o.p1, "single-qubit depolarizing probability");
  demo_cmd->add_option("--p2", o.p2, "two-qubit depolarizing probability");
  demo_cmd->add_option("--pm", o.pm, "readout flip probability");
  demo_cmd->add_option("--shots", o.shots, "shots per circuit (0 for exact)");
  demo_cmd->add_option("--out", o.out, "CSV output path");
  add_seed(demo_cmd);

  try {
    o.seed = default_seed();
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*measure_cmd) cmd_measure(o, out);
    if (*play_cmd) cmd_play(o, out);
    if (*tactic_cmd) cmd_tactic(o, out);
    if (*optimize_cmd) cmd_optimize(o, out);
    if (*sweep_cmd) cmd_sweep(o, out);
    if (*check_cmd) cmd_check(o, out);
    if (*demo_cmd) cmd_demo(o, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConstraintError& e) {
    err << "error: constraint: " << e.what() << "\n";
    return 2;
  } catch (const DimensionError& e) {
    err << "error: dimensions: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    err << "error: io: " << e.what() << "\n";
    return 3;
  } catch (const InconsistencyError& e) {
    err << "error: internal consistency: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace delocal
