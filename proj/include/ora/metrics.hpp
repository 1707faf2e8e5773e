#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "ora/core_model.hpp"
#include "ora/offline_oracle.hpp"
#include "ora/policies.hpp"

namespace ora {

struct BudgetAudit {
  bool ok = true;
  double total = 0.0;  // re-accumulated consumption
  std::string message;
};

// Re-accumulates consumption and reward from the raw per-round actions and
// checks them against the recorded totals, the budget, and monotonicity.
BudgetAudit audit_budget(const Trajectory& trajectory,
                         const InstanceParams& params);

struct Metrics {
  std::string policy;
  double total_reward = 0.0;
  double opt = 0.0;
  double regret = 0.0;
  double ratio = 0.0;  // reward / OPT (1 when OPT = 0)
  std::optional<int> depletion_round;
  double terminal_lambda = 0.0;
  std::optional<double> adv_reward;
  std::optional<double> consistency_margin;  // (1 + eps) F - F^ADV
};

class MetricsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// First round after which the remaining budget is below b_low.
std::optional<int> depletion_round(const Trajectory& trajectory,
                                   const InstanceParams& params);

// Throws MetricsError if the trajectory does not match the instance horizon.
Metrics compute_metrics(const EpisodeResult& episode,
                        const OfflineSolution& solution,
                        const InstanceParams& params, double epsilon = 0.0);

Json metrics_to_json(const Metrics& m);

}  // namespace ora
