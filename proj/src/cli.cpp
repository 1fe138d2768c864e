#include "portsel/cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "portsel/errors.hpp"
#include "portsel/format.hpp"
#include "portsel/frontier.hpp"
#include "portsel/instance.hpp"
#include "portsel/presets.hpp"

namespace portsel {

namespace {

struct Options {
  std::string instance_path;
  std::string uef_path;
  std::optional<int> max_assets;
  std::optional<double> min_frac;
  std::optional<double> max_frac;
  std::uint64_t seed = 1;
  std::string output;
  int workers = 1;

  std::string preset;
  std::string ring;
  std::string technique = "ts";
  std::string relation = "tid";
  double q = 0.3;
  std::optional<double> d;
  std::string hc_mode = "random";
  std::optional<int> max_idle;
  std::optional<long> max_iterations;
  std::optional<int> tenure_min;
  std::optional<int> tenure_max;
  std::optional<int> ring_idle_rounds;
  std::optional<double> initial_w1;
  std::optional<int> penalty_k;
  std::optional<int> penalty_h;
  std::optional<double> sa_t0;
  std::optional<double> sa_cooling;
  std::optional<int> sa_plateau;

  int trials = 4;
  bool no_warm_start = false;
  int draws = 100;

  double target = 0.0;
  std::optional<double> reference_variance;

  std::vector<std::string> compare_presets;
  std::string group;
  std::string acef_output;

  std::string parameter = "k";
  std::vector<double> values;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) parts.push_back(item);
  return parts;
}

double to_number(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw UsageError("bad number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw UsageError("bad number '" + s + "'");
  }
}

void apply_overrides(RunnerConfig& r, const Options& o) {
  if (o.max_idle) r.max_idle = *o.max_idle;
  if (o.max_iterations) r.max_iterations = *o.max_iterations;
  if (o.tenure_min) r.tenure_min = *o.tenure_min;
  if (o.tenure_max) r.tenure_max = *o.tenure_max;
  if (o.initial_w1) r.penalty.initial_constraint_weight = *o.initial_w1;
  if (o.penalty_k) r.penalty.satisfied_threshold = *o.penalty_k;
  if (o.penalty_h) r.penalty.violated_threshold = *o.penalty_h;
  if (o.sa_t0) r.start_temperature = *o.sa_t0;
  if (o.sa_cooling) r.cooling = *o.sa_cooling;
  if (o.sa_plateau) r.iterations_per_temperature = *o.sa_plateau;
}

// Ring entries are "technique:relation:q[:d]" separated by commas; d
// defaults to q (random step).
TokenRing parse_ring(const std::string& text) {
  TokenRing ring;
  for (const auto& entry : split(text, ',')) {
    const auto f = split(entry, ':');
    if (f.size() < 3 || f.size() > 4) throw UsageError("bad ring entry '" + entry + "'");
    RunnerConfig r;
    try {
      r.technique = parse_technique(f[0]);
      r.relation = parse_relation(f[1]);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    r.step.base = to_number(f[2]);
    r.step.spread = f.size() == 4 ? to_number(f[3]) : r.step.base;
    ring.runners.push_back(r);
  }
  if (ring.runners.empty()) throw UsageError("empty ring description");
  return ring;
}

TokenRing with_overrides(TokenRing ring, const Options& o) {
  for (auto& r : ring.runners) apply_overrides(r, o);
  if (o.ring_idle_rounds) ring.max_idle_rounds = *o.ring_idle_rounds;
  try {
    validate(ring);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return ring;
}

TokenRing build_solver(const Options& o) {
  if (!o.preset.empty()) {
    auto p = find_preset(o.preset);
    if (!p) throw UsageError("unknown preset '" + o.preset + "'");
    return with_overrides(p->solver, o);
  }
  if (!o.ring.empty()) return with_overrides(parse_ring(o.ring), o);
  RunnerConfig r;
  try {
    r.technique = parse_technique(o.technique);
    r.relation = parse_relation(o.relation);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  r.step = {o.q, o.d.value_or(0.0)};
  if (o.hc_mode == "steepest") {
    r.selection = SelectionMode::Steepest;
  } else if (o.hc_mode != "random") {
    throw UsageError("hc mode must be 'random' or 'steepest'");
  }
  return with_overrides(single_runner(r), o);
}

Instance load_configured_instance(const Options& o) {
  Instance inst = load_instance(o.instance_path);
  if (o.max_assets) inst.max_assets = *o.max_assets;
  if (o.min_frac) inst.min_frac.setConstant(*o.min_frac);
  if (o.max_frac) inst.max_frac.setConstant(*o.max_frac);
  validate(inst);
  return inst;
}

SweepConfig sweep_config(const Options& o, TokenRing solver) {
  SweepConfig cfg;
  cfg.trials = o.trials;
  cfg.solver = std::move(solver);
  cfg.seed = o.seed;
  cfg.warm_start = !o.no_warm_start;
  cfg.initial_draws = o.draws;
  cfg.workers = o.workers;
  return cfg;
}

// Writes to --output when given, else to `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw std::runtime_error("cannot open output file " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }
  bool to_file() const { return file_ != nullptr; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

int cmd_solve(const Options& o, std::ostream& out) {
  const Instance inst = load_configured_instance(o);
  const TokenRing solver = build_solver(o);
  const auto size = max_feasible_size(inst);
  if (!size) throw InfeasibleError("no feasible portfolio size");
  Rng rng(derive_seed(o.seed, 0, 0));
  const PenaltyWeights initial{solver.runners.front().penalty.initial_constraint_weight,
                               solver.runners.front().penalty.objective_weight};
  const Portfolio start = best_of_random(inst, *size, o.target, o.draws, rng, initial);
  const RunResult res = run_token_ring(solver, start, inst, o.target, rng);
  const Objective obj = evaluate_objective(res.best, inst);

  Sink sink(o.output, out);
  auto& s = sink.stream();
  s << "target_return " << format_double(o.target) << '\n';
  s << "expected_return " << format_double(obj.expected_return) << '\n';
  s << "variance " << format_double(obj.variance) << '\n';
  s << "return_violation " << format_double(shortfall(obj.expected_return, o.target)) << '\n';
  s << "feasible " << (res.feasible() ? 1 : 0) << '\n';
  if (o.reference_variance)
    s << "loss_pct " << format_double(percent_loss(obj.variance, *o.reference_variance)) << '\n';
  s << "iterations " << res.iterations << '\n';
  s << "assets " << res.best.size() << '\n';
  s << "asset,fraction\n";
  auto holdings = res.best.holdings;
  std::sort(holdings.begin(), holdings.end(), [](const Holding& a, const Holding& b) { return a.asset < b.asset; });
  for (const auto& h : holdings) s << h.asset + 1 << ',' << format_double(h.fraction) << '\n';
  return 0;
}

int cmd_frontier(const Options& o, std::ostream& out, std::ostream& err) {
  const Instance inst = load_configured_instance(o);
  const UefReference uef = load_uef(o.uef_path);
  const auto points = sweep(inst, uef, sweep_config(o, build_solver(o)));
  Sink sink(o.output, out);
  write_frontier_csv(points, sink.stream());
  std::ostream& summary = sink.to_file() ? out : err;
  const int feasible = count_feasible(points);
  summary << "mean_loss_pct " << (feasible > 0 ? format_fixed(avg_percent_loss(points), 5) : std::string("nan"))
          << " feasible_points "
          << feasible << '/' << points.size() << '\n';
  return 0;
}

int cmd_compare(const Options& o, std::ostream& out) {
  std::vector<Preset> configs;
  if (!o.group.empty()) configs = preset_group(o.group);
  for (const auto& name : o.compare_presets) {
    auto p = find_preset(name);
    if (!p) throw UsageError("unknown preset '" + name + "'");
    configs.push_back(*p);
  }
  if (configs.empty()) throw UsageError("compare needs --presets or --group");

  const Instance inst = load_configured_instance(o);
  const UefReference uef = load_uef(o.uef_path);
  std::vector<std::vector<FrontierPoint>> runs;
  Sink sink(o.output, out);
  auto& s = sink.stream();
  s << "config,description,mean_loss_pct,feasible_points\n";
  for (const auto& c : configs) {
    runs.push_back(sweep(inst, uef, sweep_config(o, with_overrides(c.solver, o))));
    const int feasible = count_feasible(runs.back());
    s << c.name << ',' << c.description << ','
      << (feasible > 0 ? format_fixed(avg_percent_loss(runs.back()), 5) : std::string("nan")) << ',' << feasible
      << '\n';
  }
  const auto acef = merge_acef(runs);
  const int feasible = count_feasible(acef);
  s << "acef,pointwise best of all configs," << (feasible > 0 ? format_fixed(avg_percent_loss(acef), 5) : "nan")
    << ',' << feasible << '\n';
  if (!o.acef_output.empty()) {
    std::ofstream f(o.acef_output, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + o.acef_output);
    write_frontier_csv(acef, f);
  }
  return 0;
}

int cmd_sensitivity(const Options& o, std::ostream& out) {
  SensitivityParameter param;
  if (o.parameter == "k") {
    param = SensitivityParameter::MaxAssets;
  } else if (o.parameter == "eps") {
    param = SensitivityParameter::MinFraction;
  } else {
    throw UsageError("--param must be 'k' or 'eps'");
  }
  if (o.values.empty()) throw UsageError("sensitivity needs --values");
  Instance inst = load_instance(o.instance_path);
  if (o.max_assets) inst.max_assets = *o.max_assets;
  if (o.min_frac) inst.min_frac.setConstant(*o.min_frac);
  if (o.max_frac) inst.max_frac.setConstant(*o.max_frac);
  const UefReference uef = load_uef(o.uef_path);
  const auto rows = sensitivity_study(inst, uef, param, o.values, sweep_config(o, build_solver(o)));
  Sink sink(o.output, out);
  auto& s = sink.stream();
  s << (param == SensitivityParameter::MaxAssets ? "k" : "eps") << ",avg_loss_pct,feasible_points\n";
  for (const auto& r : rows)
    s << format_short(r.value) << ',' << (r.avg_loss ? format_double(*r.avg_loss) : "nan") << ','
      << r.feasible_points << '\n';
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Local-search solver for cardinality- and quantity-constrained mean-variance portfolios",
               "portsel"};
  app.set_config("--config", "", "Read options from a 'key = value' file (command-line flags take precedence)");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--instance", o.instance_path, "Instance file in OR-Library 'port' format")->check(CLI::ExistingFile);
  app.add_option("--uef", o.uef_path, "Reference frontier file ('portef' format)")->check(CLI::ExistingFile);
  app.add_option("--k", o.max_assets, "Maximum number of assets (default 10)")->check(CLI::PositiveNumber);
  app.add_option("--eps", o.min_frac, "Minimum fraction of each held asset (default 0.01)")->check(CLI::Range(0.0, 1.0));
  app.add_option("--delta", o.max_frac, "Maximum fraction of each held asset (default 1)")->check(CLI::Range(0.0, 1.0));
  app.add_option("--seed", o.seed, "Master random seed");
  app.add_option("--output,-o", o.output, "Output file (default stdout)");
  app.add_option("--workers", o.workers, "Concurrent trials per frontier point")->check(CLI::PositiveNumber);

  app.add_option("--preset", o.preset, "Named solver configuration (see 'portsel presets')");
  app.add_option("--ring", o.ring, "Token ring, e.g. ts:tid:0.4,ts:idr:0.05 (technique:relation:q[:d])");
  app.add_option("--solver", o.technique, "Single runner technique: ts, hc or sa");
  app.add_option("--nbh", o.relation, "Neighborhood relation: tid, idid or idr");
  app.add_option("--q", o.q, "Step base")->check(CLI::Range(0.0, 1.0));
  app.add_option("--d", o.d, "Step spread (0 = fixed step)")->check(CLI::NonNegativeNumber);
  app.add_option("--hc-mode", o.hc_mode, "Hill climbing move selection: random or steepest");
  app.add_option("--idle", o.max_idle, "Idle iterations before a runner stops")->check(CLI::PositiveNumber);
  app.add_option("--iterations", o.max_iterations, "Iteration cap per runner")->check(CLI::NonNegativeNumber);
  app.add_option("--tenure-min", o.tenure_min, "Minimum tabu tenure")->check(CLI::PositiveNumber);
  app.add_option("--tenure-max", o.tenure_max, "Maximum tabu tenure")->check(CLI::PositiveNumber);
  app.add_option("--ring-idle-rounds", o.ring_idle_rounds, "Token-ring rounds without improvement before stopping")
      ->check(CLI::PositiveNumber);
  app.add_option("--w1", o.initial_w1, "Initial return-constraint weight")->check(CLI::PositiveNumber);
  app.add_option("--penalty-k", o.penalty_k, "Feasible iterations before w1 shrinks")->check(CLI::PositiveNumber);
  app.add_option("--penalty-h", o.penalty_h, "Infeasible iterations before w1 grows")->check(CLI::PositiveNumber);
  app.add_option("--sa-t0", o.sa_t0, "Annealing start temperature (default: 10x initial cost)");
  app.add_option("--sa-cooling", o.sa_cooling, "Annealing cooling factor")->check(CLI::Range(0.0, 1.0));
  app.add_option("--sa-plateau", o.sa_plateau, "Annealing iterations per temperature")->check(CLI::PositiveNumber);
  app.add_option("--draws", o.draws, "Random portfolios drawn for the initial state")->check(CLI::PositiveNumber);
  app.add_option("--trials", o.trials, "Trials per frontier point")->check(CLI::PositiveNumber);
  app.add_flag("--no-warm-start", o.no_warm_start, "Start every trial from a random portfolio");

  auto* solve = app.add_subcommand("solve", "Solve a single target return and print the portfolio");
  solve->add_option("--return,-R", o.target, "Target expected return")->required();
  solve->add_option("--reference-variance", o.reference_variance, "Report the percentage loss against this variance");

  auto* frontier = app.add_subcommand("frontier", "Sweep the reference frontier's returns and write CSV");
  auto* compare = app.add_subcommand("compare", "Sweep several presets and summarize their mean loss");
  compare->add_option("--presets", o.compare_presets, "Preset names")->delimiter(',');
  compare->add_option("--group", o.group, "Preset group: table2 or table3");
  compare->add_option("--acef-output", o.acef_output, "Write the pointwise best frontier as CSV");
  auto* sensitivity = app.add_subcommand("sensitivity", "Mean loss as k or the minimum fraction varies");
  sensitivity->add_option("--param", o.parameter, "k or eps");
  sensitivity->add_option("--values", o.values, "Comma-separated parameter values")->delimiter(',');
  auto* list = app.add_subcommand("presets", "List the named solver configurations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return 2;
  }

  try {
    if (list->parsed()) {
      for (const auto& p : presets()) out << p.name << "  " << p.description << '\n';
      return 0;
    }
    if (o.instance_path.empty()) throw UsageError("--instance is required");
    if ((frontier->parsed() || compare->parsed() || sensitivity->parsed()) && o.uef_path.empty())
      throw UsageError("--uef is required");
    if (solve->parsed()) return cmd_solve(o, out);
    if (frontier->parsed()) return cmd_frontier(o, out, err);
    if (compare->parsed()) return cmd_compare(o, out);
    if (sensitivity->parsed()) return cmd_sensitivity(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace portsel
