#pragma once

#include <optional>
#include <string>
#include <variant>

#include "ora/baselines.hpp"
#include "ora/core_model.hpp"
#include "ora/learning_augmented.hpp"
#include "ora/robust_policy.hpp"

namespace ora {

// lambda_1 <= 0 means lambda_max / 2; an empty eta means sqrt(ln T / T).
struct RobustConfig {
  double lambda_1 = 0.0;
  std::optional<double> eta;
};

struct OmdConfig {
  double lambda_1 = 0.0;
  std::optional<double> eta;
};

// window 0 = full history.
struct RoaConfig {
  double lambda_1 = 0.0;
  int window = 0;
};

struct StaticConfig {
  double lambda = 0.0;
};

struct GreedyConfig {};

using PolicySpec = std::variant<RobustConfig, OmdConfig, RoaConfig,
                                StaticConfig, GreedyConfig, LaConfig>;

struct PolicyConfig {
  std::string name;
  PolicySpec spec;
};

// "robust", "omd", "roa", "static", "greedy" or "la".
std::string policy_kind(const PolicySpec& spec);

// Steps any policy one request at a time and keeps its telemetry. Adaptive
// adversaries only read budget() and trajectory().
class PolicyRunner {
 public:
  PolicyRunner(const PolicyConfig& config, const InstanceParams& params);

  const StepRecord& step(const Request& request);

  Budget budget() const;
  const Trajectory& trajectory() const { return trajectory_; }
  const PolicyConfig& config() const { return config_; }

  // Multiplier the policy would use next (after the last round).
  double next_lambda() const;
  // Stepsize in use, 0 for policies without one.
  double eta() const;

  // Present only for the learning-augmented policy.
  const LaRun* la_run() const { return la_run_ ? &*la_run_ : nullptr; }

 private:
  struct StaticRun {
    double lambda = 0.0;
    Ledger ledger;
  };

  PolicyConfig config_;
  InstanceParams params_;
  std::variant<RobustState, OmdState, RoaState, StaticRun, LaState> state_;
  Trajectory trajectory_;
  std::optional<LaRun> la_run_;
};

struct EpisodeResult {
  Trajectory trajectory;
  double terminal_lambda = 0.0;
  double eta = 0.0;
  std::optional<LaRun> la;
};

EpisodeResult run_episode(const PolicyConfig& config, const Instance& instance);

struct AdaptiveEpisode {
  Instance instance;  // the realized request stream
  EpisodeResult result;
  int switch_round = -1;
};

// Plays the policy against the switching adversary and records the stream.
AdaptiveEpisode run_switch_episode(const PolicyConfig& config,
                                   const InstanceParams& params,
                                   double quantum,
                                   double switch_fraction = 0.0);

}  // namespace ora
