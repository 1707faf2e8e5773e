// ora: simulate, sweep, oracle and figure1 front end.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

#include "ora/experiment.hpp"

namespace {

using namespace ora;

constexpr int kExitUsage = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitMismatch = 4;

struct Overrides {
  std::vector<std::uint64_t> seeds;
  std::vector<int> horizons;
  std::vector<std::string> policies;
  double epsilon = 0.0;
  std::string advice;
};

// Applies --seed/--T/--policy/--epsilon/--advice on top of a config.
void apply(const Overrides& o, ExperimentConfig& c) {
  if (!o.seeds.empty()) c.seeds = o.seeds;
  if (!o.horizons.empty()) c.horizons = o.horizons;
  if (!o.policies.empty()) {
    c.policies = Json::array();
    for (const std::string& p : o.policies) c.policies.push_back(Json{{"kind", p}});
  }
  if (c.policies.empty()) c.policies.push_back(Json{{"kind", "robust"}});
  Json advice;
  if (!o.advice.empty()) advice = read_json_file(o.advice);
  for (Json& p : c.policies) {
    if (!p.contains("kind") || p.at("kind") != "la") continue;
    if (o.epsilon > 0.0) p["epsilon"] = o.epsilon;
    if (!o.advice.empty()) p["advice"] = advice;
  }
}

std::string join(const std::vector<int>& v, const char* sep) {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? sep : "") << v[i];
  return out.str();
}

std::string policy_tag(const Json& policies) {
  std::string tag;
  for (const Json& p : policies) {
    if (!tag.empty()) tag += "+";
    tag += p.value("name", p.value("kind", std::string("policy")));
  }
  return tag;
}

std::vector<LabeledTrajectory> labeled(const std::vector<InstanceOutput>& cells) {
  std::vector<LabeledTrajectory> rows;
  for (const InstanceOutput& c : cells)
    for (const EpisodeOutput& e : c.episodes)
      rows.push_back({c.seed, &e.episode.trajectory});
  return rows;
}

int report_audits(const std::vector<InstanceOutput>& cells) {
  for (const InstanceOutput& c : cells)
    for (const EpisodeOutput& e : c.episodes)
      if (!e.audit.ok) {
        std::cerr << "budget audit failed: " << e.audit.message << "\n";
        return kExitInvariant;
      }
  return 0;
}

int cmd_simulate(const std::string& config_path, const Overrides& o,
                 std::string run_id) {
  ExperimentConfig c = config_from_json(read_json_file(config_path));
  apply(o, c);
  const std::vector<InstanceOutput> cells = run_sweep(c, {true, true});
  Json instances = Json::array();
  for (const InstanceOutput& cell : cells) {
    Json entry;
    entry["T"] = cell.horizon;
    entry["seed"] = cell.seed;
    entry["instance"] = instance_to_json(make_instance(c.family, cell.horizon, cell.seed));
    instances.push_back(std::move(entry));
  }
  const auto rows = aggregate(cells);
  Json metrics = sweep_to_json(cells, rows);
  metrics["config"] = config_to_json(c);
  if (run_id.empty())
    run_id = "simulate-" + std::filesystem::path(config_path).stem().string();
  const std::string summary = summary_markdown("simulate " + run_id, rows);
  const auto dir = write_run(run_id, {instances, trajectories_csv(labeled(cells)),
                                      metrics, summary});
  std::cout << summary << "\nwritten to " << dir.string() << "\n";
  return report_audits(cells);
}

int cmd_sweep(const std::string& config_path, const Overrides& o,
              const std::string& family, bool serial, std::string run_id) {
  ExperimentConfig c;
  if (!config_path.empty()) c = config_from_json(read_json_file(config_path));
  else c.horizons = {250, 500, 1000, 2000, 4000};
  if (!family.empty()) c.family.kind = family;
  Overrides ov = o;
  if (ov.seeds.size() == 1 && config_path.empty()) {
    // --seeds N means seeds 0..N-1
    const std::uint64_t n = ov.seeds[0];
    ov.seeds.clear();
    for (std::uint64_t s = 0; s < n; ++s) ov.seeds.push_back(s);
  }
  apply(ov, c);
  if (c.seeds.empty()) c.seeds = {0};
  const std::vector<InstanceOutput> cells = run_sweep(c, {!serial, false});
  Json instances = Json::array();
  for (const InstanceOutput& cell : cells) {
    Json entry;
    entry["family"] = family_to_json(c.family);
    entry["T"] = cell.horizon;
    entry["seed"] = cell.seed;
    entry["opt"] = cell.solution.value;
    entry["lambda_star"] = cell.solution.lambda_star;
    instances.push_back(std::move(entry));
  }
  const auto rows = aggregate(cells);
  Json metrics = sweep_to_json(cells, rows);
  metrics["config"] = config_to_json(c);
  if (run_id.empty())
    run_id = "sweep-" + policy_tag(c.policies) + "-T" + join(c.horizons, "_") +
             "-s" + std::to_string(c.seeds.size());
  const std::string summary = summary_markdown("sweep " + run_id, rows);
  // Per-round traces are not kept for sweeps; the CSV carries the header only.
  const auto dir = write_run(run_id, {instances, trajectories_csv({}), metrics, summary});
  std::cout << summary << "\nwritten to " << dir.string() << "\n";
  return report_audits(cells);
}

int cmd_oracle(const std::string& instance_path, const std::string& snapshot,
               std::string run_id) {
  const Instance inst = load_instance(instance_path);
  const auto violations = validate_instance(inst);
  if (!violations.empty()) {
    for (const Violation& v : violations)
      std::cerr << "round " << v.round << ": " << v.message << "\n";
    return kExitUsage;
  }
  const OfflineSolution sol = solve_opt(inst);
  Trajectory tr;
  tr.policy = "oracle";
  double reward = 0.0, consumption = 0.0;
  for (std::size_t t = 0; t < sol.actions.size(); ++t) {
    StepRecord s;
    s.t = static_cast<int>(t) + 1;
    s.lambda = sol.lambda_star;
    s.action = sol.actions[t];
    reward += s.action.reward;
    consumption += s.action.consumption;
    s.cum_reward = reward;
    s.cum_consumption = consumption;
    s.remaining = inst.params.budget - consumption;
    tr.steps.push_back(s);
  }
  Json metrics = solution_to_json(sol);
  if (run_id.empty())
    run_id = "oracle-" + std::filesystem::path(instance_path).stem().string();
  std::ostringstream summary;
  summary << "# oracle " << run_id << "\n\n"
          << "| OPT | lambda* | dual at lambda* | dual gap | method |\n"
          << "|---|---|---|---|---|\n"
          << "| " << format_number(sol.value) << " | "
          << format_number(sol.lambda_star) << " | "
          << format_number(sol.dual_at_star) << " | "
          << format_number(sol.dual_gap) << " | " << sol.method << " |\n";
  const auto dir = write_run(run_id, {instance_to_json(inst),
                                      trajectories_csv({{0, &tr}}), metrics,
                                      summary.str()});
  std::cout << summary.str() << "\nwritten to " << dir.string() << "\n";
  if (!snapshot.empty()) {
    const Json snap = read_json_file(snapshot);
    const double expected = snap.at("value").get<double>();
    if (expected != sol.value) {
      std::cerr << "OPT " << format_number(sol.value)
                << " differs from snapshot " << format_number(expected) << "\n";
      return kExitMismatch;
    }
    std::cout << "matches snapshot " << snapshot << "\n";
  }
  return 0;
}

int cmd_figure1(std::uint64_t seed, std::string run_id) {
  const Figure1Run run = run_figure1(seed);
  if (run_id.empty()) run_id = "figure1-seed" + std::to_string(seed);
  std::vector<InstanceOutput> cells(1);
  cells[0].horizon = run.instance.params.horizon;
  cells[0].seed = seed;
  cells[0].solution = run.solution;
  cells[0].solution.actions.clear();
  for (const EpisodeResult* e : {&run.robust, &run.omd, &run.roa}) {
    EpisodeOutput out;
    out.horizon = cells[0].horizon;
    out.seed = seed;
    out.episode = *e;
    out.audit = audit_budget(e->trajectory, run.instance.params);
    out.metrics = compute_metrics(*e, run.solution, run.instance.params);
    cells[0].episodes.push_back(std::move(out));
  }
  const auto rows = aggregate(cells);
  Json metrics = sweep_to_json(cells, rows);
  metrics["lambda_star"] = run.solution.lambda_star;
  const std::string summary = summary_markdown("figure1 " + run_id, rows);
  const auto dir = write_run(run_id, {instance_to_json(run.instance),
                                      trajectories_csv(labeled(cells)), metrics,
                                      summary});
  const Figure1Panels panels = figure1_panels(run);
  write_text_file(dir / "figure1_reward.csv", panels.reward);
  write_text_file(dir / "figure1_degradation.csv", panels.degradation);
  write_text_file(dir / "figure1_lambda.csv", panels.lambda);
  std::cout << summary << "\nOPT " << format_number(run.solution.value)
            << ", lambda* " << format_number(run.solution.lambda_star)
            << "\nwritten to " << dir.string() << "\n";
  return report_audits(cells);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online resource allocation under calendar aging"};
  app.require_subcommand(1);

  Overrides o;
  std::string run_id;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--run-id", run_id, "Output directory name under $ORA_OUT (default outputs)");
  };

  auto* simulate = app.add_subcommand("simulate", "Run policies on configured instances, keeping traces");
  std::string config_path;
  simulate->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--seed", o.seeds, "Seed(s), overriding the config")->delimiter(',');
  simulate->add_option("--T", o.horizons, "Horizon(s), overriding the config")->delimiter(',');
  simulate->add_option("--policy", o.policies, "Policy kinds: robust,omd,roa,static,greedy,la")->delimiter(',');
  simulate->add_option("--epsilon", o.epsilon, "Consistency slack for la policies");
  simulate->add_option("--advice", o.advice, "Advice file for la policies")->check(CLI::ExistingFile);
  add_common(simulate);

  auto* sweep = app.add_subcommand("sweep", "T x seed grid with aggregate regret tables");
  std::string sweep_config, family;
  bool serial = false;
  sweep->add_option("--config", sweep_config, "JSON config file")->check(CLI::ExistingFile);
  sweep->add_option("--T", o.horizons, "Horizons, comma separated")->delimiter(',');
  sweep->add_option("--seeds", o.seeds, "Number of seeds (0..N-1), or a list with --config")->delimiter(',');
  sweep->add_option("--policy", o.policies, "Policy kinds")->delimiter(',');
  sweep->add_option("--family", family, "Instance family: linear or menu");
  sweep->add_option("--epsilon", o.epsilon, "Consistency slack for la policies");
  sweep->add_option("--advice", o.advice, "Advice file for la policies")->check(CLI::ExistingFile);
  sweep->add_flag("--serial", serial, "Disable the parallel cell loop");
  add_common(sweep);

  auto* oracle = app.add_subcommand("oracle", "Solve an instance exactly and store OPT and lambda*");
  std::string instance_path, snapshot;
  oracle->add_option("--instance", instance_path, "Instance JSON")->required()->check(CLI::ExistingFile);
  oracle->add_option("--snapshot", snapshot, "Stored solution to compare OPT against")->check(CLI::ExistingFile);
  add_common(oracle);

  auto* figure1 = app.add_subcommand("figure1", "Linear benchmark (T=2000, rho=0.1, delta=0.01): robust vs OMD vs average-of-ratios");
  std::uint64_t fig_seed = 0;
  figure1->add_option("--seed", fig_seed, "Instance seed");
  add_common(figure1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(config_path, o, run_id);
    if (*sweep) return cmd_sweep(sweep_config, o, family, serial, run_id);
    if (*oracle) return cmd_oracle(instance_path, snapshot, run_id);
    if (*figure1) return cmd_figure1(fig_seed, run_id);
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FormatError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
