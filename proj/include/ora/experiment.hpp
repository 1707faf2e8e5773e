#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "ora/generators.hpp"
#include "ora/instance_io.hpp"
#include "ora/metrics.hpp"
#include "ora/offline_oracle.hpp"
#include "ora/policies.hpp"

namespace ora {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// kind: "linear" (rho, delta), "menu" (MenuFamily keys) or "file" (path).
struct FamilySpec {
  std::string kind = "linear";
  double rho = 0.1;
  double delta = 0.01;
  MenuFamily menu;
  std::string path;
};

Instance make_instance(const FamilySpec& family, int horizon,
                       std::uint64_t seed);

Json family_to_json(const FamilySpec& family);
FamilySpec family_from_json(const Json& j);

// Policies stay as JSON until the instance parameters are known, because
// defaults (lambda_1, stepsize, advice length) depend on them.
//   {"kind":"robust", "name":..., "lambda_1":x, "eta":x|"auto"}
//   {"kind":"omd", ...same}, {"kind":"roa", "lambda_1":x, "window":n|"all"}
//   {"kind":"static", "lambda":x}, {"kind":"greedy"}
//   {"kind":"la", "epsilon":x, "advice":A, "rob":A, "ignore":"lead"|...}
// where A is a JSON array of multipliers, {"policy":"constant","lambda":x}
// or {"policy":"robust","lambda_1":x,"eta":x}.
PolicyConfig build_policy(const Json& spec, const InstanceParams& params);
MultiplierSource build_multiplier_source(const Json& spec,
                                         const InstanceParams& params);

struct ExperimentConfig {
  FamilySpec family;
  Json policies = Json::array();
  std::vector<int> horizons;
  std::vector<std::uint64_t> seeds;
};

ExperimentConfig config_from_json(const Json& j);
Json config_to_json(const ExperimentConfig& c);

struct EpisodeOutput {
  int horizon = 0;
  std::uint64_t seed = 0;
  Metrics metrics;
  BudgetAudit audit;
  EpisodeResult episode;  // trajectory dropped unless requested
};

struct InstanceOutput {
  int horizon = 0;
  std::uint64_t seed = 0;
  OfflineSolution solution;  // actions dropped
  std::vector<EpisodeOutput> episodes;  // one per policy, config order
};

struct SweepOptions {
  bool parallel = true;
  bool keep_trajectories = false;
};

// One cell per (T, seed): generate, solve exactly, run every policy.
std::vector<InstanceOutput> run_sweep(const ExperimentConfig& config,
                                      const SweepOptions& options = {});

struct AggregateRow {
  std::string policy;
  int horizon = 0;
  int n = 0;
  double mean_reward = 0.0;
  double se_reward = 0.0;
  double mean_opt = 0.0;
  double mean_regret = 0.0;
  double se_regret = 0.0;
  double regret_per_t = 0.0;
  double regret_scaled = 0.0;  // mean regret / sqrt(T ln T)
  double mean_ratio = 0.0;
  int budget_failures = 0;
};

std::vector<AggregateRow> aggregate(const std::vector<InstanceOutput>& cells);

// Shortest round-trip decimal form.
std::string format_number(double v);

struct LabeledTrajectory {
  std::uint64_t seed = 0;
  const Trajectory* trajectory = nullptr;
};

// policy,seed,t,lambda,p_bar,mu,reward,consumption,cum_reward,
// cum_consumption,remaining,endgame
std::string trajectories_csv(const std::vector<LabeledTrajectory>& rows);

std::string csv_field(const std::string& s);

Json sweep_to_json(const std::vector<InstanceOutput>& cells,
                   const std::vector<AggregateRow>& rows);
std::string summary_markdown(const std::string& title,
                             const std::vector<AggregateRow>& rows);

// $ORA_OUT if set, otherwise "outputs".
std::filesystem::path output_root();

struct RunFiles {
  Json instances;
  std::string trajectories_csv;
  Json metrics;
  std::string summary;
};

// Writes instances.json, trajectories.csv, metrics.json and summary.md.
std::filesystem::path write_run(const std::string& run_id, const RunFiles& files);

// Linear benchmark comparison: T = 2000, rho = 0.1, delta = 0.01, every policy
// starting from lambda_1 = 0.5 with eta = 1/sqrt(T) and a full-history
// average-of-ratios window.
struct Figure1Run {
  Instance instance;
  OfflineSolution solution;
  EpisodeResult robust, omd, roa;
};

inline constexpr int kFigure1Horizon = 2000;
inline constexpr double kFigure1Rho = 0.1;
inline constexpr double kFigure1Delta = 0.01;
inline constexpr double kFigure1Lambda1 = 0.5;

Figure1Run run_figure1(std::uint64_t seed, int horizon = kFigure1Horizon);

// Cumulative reward, cumulative consumption and multiplier panels, each a
// CSV with columns t,robust,omd,roa.
struct Figure1Panels {
  std::string reward;
  std::string degradation;
  std::string lambda;
};

Figure1Panels figure1_panels(const Figure1Run& run);

}  // namespace ora
