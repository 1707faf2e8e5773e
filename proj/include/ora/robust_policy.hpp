#pragma once

#include <utility>
#include <vector>

#include "ora/core_model.hpp"

namespace ora {

// Opportunity-cost policy whose multiplier is the running ratio of
// cumulative reward to cumulative consumption plus a projected
// gradient-descent correction.
struct RobustState {
  InstanceParams params;
  int t = 0;  // rounds played
  double eta = 0.0;
  double lambda = 0.0;  // multiplier for the next round
  double p_bar = 0.0;   // rolling average for the next round
  double mu = 0.0;      // correction for the next round
  Ledger ledger;
};

// sqrt(ln T / T); rejects T < 2.
double default_stepsize(int horizon);

// Rejects lambda_1 <= 0 and eta <= 0 with std::invalid_argument.
RobustState robust_init(const InstanceParams& params, double lambda_1,
                        double eta);

struct RobustStep {
  Action action;
  RobustState next;
};

RobustStep robust_step(const RobustState& state, const Request& request);

// Telemetry row for the round that `state` is about to play.
StepRecord robust_record(const RobustState& before, const Action& action,
                         const RobustState& after);

// Sum of |p_{i+1} - p_i| over consecutive entries.
double path_length(const std::vector<double>& seq);

// Path length of the rolling average over rounds 2..T (round 1 reports the
// initial multiplier in the p_bar column).
double path_length(const Trajectory& trajectory);

// C_p = (f_bar / b_low) * (1 + b_bar / b_low).
double rolling_average_constant(const InstanceParams& params);

struct PathLengthCheck {
  double total = 0.0;
  double bound = 0.0;
  int step_violations = 0;
  double worst_step_ratio = 0.0;  // max over t of |dp| / (C_p / t)
  bool ok() const { return total <= bound && step_violations == 0; }
};

// Verifies the total bound C_p (ln T + 1) and the per-step bound C_p / t.
PathLengthCheck check_path_length(const Trajectory& trajectory,
                                  const InstanceParams& params);

struct DynamicRegretCheck {
  double lhs = 0.0;
  double bound = 0.0;
  bool ok() const { return lhs <= bound; }
};

// Compares sum_t g_t (mu_t - nu_t), nu_t = lambda_ref - p_bar_t, against
// (5 D^2 / 2 eta) PL(nu) + eta T G^2 / 2 with D = lambda_max, G = rho + b_bar
// and lambda_ref = f_bar / rho.
DynamicRegretCheck check_dynamic_regret(const Trajectory& trajectory,
                                        const InstanceParams& params,
                                        double eta);

}  // namespace ora
