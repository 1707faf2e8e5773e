#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "ora/core_model.hpp"
#include "ora/robust_policy.hpp"

namespace ora {

// Fixed multiplier per round, lambdas[t - 1] for round t.
struct MultiplierSequence {
  std::vector<double> lambdas;
};

// The rolling-average policy run as a black box.
struct RobustSource {
  double lambda_1 = 0.0;         // <= 0 selects lambda_max / 2
  std::optional<double> eta;     // empty selects sqrt(ln T / T)
};

using MultiplierSource = std::variant<MultiplierSequence, RobustSource>;

MultiplierSequence constant_multiplier(double lambda, int horizon);

// A multiplier-driven policy replayed on the request stream with its own
// budget ledger, independent of what the algorithm actually plays.
class SimulatedPolicy {
 public:
  SimulatedPolicy(MultiplierSource source, const InstanceParams& params,
                  bool freeze_when_depleted);

  struct Move {
    double lambda = 0.0;
    Action action;
  };

  Move step(const Request& request);

  const Ledger& ledger() const { return ledger_; }
  bool frozen() const { return frozen_; }

 private:
  double current_lambda() const;

  MultiplierSource source_;
  InstanceParams params_;
  bool freeze_when_depleted_;
  Ledger ledger_;
  std::optional<RobustState> robust_;
  bool frozen_ = false;
  double frozen_lambda_ = 0.0;
};

// Which of the three consistency constraints the algorithm enforces.
// Disabling one yields the constraint-ignoring variants used to show that
// each constraint is needed.
struct ConstraintMask {
  bool remaining_tight = true;  // B_rem <= T_rem * b_bar branch
  bool remaining_rich = true;   // B_rem > T_rem * b_bar branch
  bool lead = true;             // beta > 0 branch
  bool all() const { return remaining_tight && remaining_rich && lead; }
};

// Post-decision quantities at the end of round t.
struct ConstraintInputs {
  double reward = 0.0;      // F_{1:t}
  double adv_reward = 0.0;  // F^ADV_{1:t}
  double remaining = 0.0;   // B - B_{1:t}
  int rounds_left = 0;      // T - t
  double beta = 0.0;        // B_{1:t} - B^ADV_{1:t}
};

// LHS - RHS of each constraint whose premise holds; empty when inactive.
struct ConstraintMargins {
  std::optional<double> remaining_tight;
  std::optional<double> remaining_rich;
  std::optional<double> lead;
};

ConstraintMargins constraint_margins(const ConstraintInputs& in,
                                     const InstanceParams& params,
                                     double epsilon);

bool constraints_ok(const ConstraintInputs& in, const InstanceParams& params,
                    double epsilon, const ConstraintMask& mask = {});

// State at the start of round t (everything through round t - 1).
struct EndgameInputs {
  int t = 1;
  double remaining = 0.0;      // B - B_{1:t-1}
  double beta = 0.0;           // B_{1:t-1} - B^ADV_{1:t-1}
  double adv_remaining = 0.0;  // B - B^ADV_{1:t-1}
};

// rich > poor > no_advice > times_up. The advice counts as exhausted once
// its remaining budget can no longer cover b_low.
Endgame check_endgame(const EndgameInputs& in, const InstanceParams& params);

struct ThetaContext {
  InstanceParams params;
  double epsilon = 0.0;
  ConstraintMask mask;
  int t = 1;
  Budget budget{0.0};         // algorithm budget before round t
  double reward = 0.0;        // F_{1:t-1}
  double adv_reward = 0.0;    // F^ADV_{1:t}, including this round
  double adv_consumption = 0.0;  // B^ADV_{1:t}, including this round
  double lambda_rob = 0.0;
  double lambda_adv = 0.0;
  Action adv_action;          // what the advice plays this round
};

struct ThetaChoice {
  double theta = 0.0;
  double lambda = 0.0;
  Action action;
  bool theta_zero_ok = true;  // whether following the advice passes
};

// The action played for a given robustness weight. Weight 0 reproduces the
// advice's own action whenever the algorithm can afford it.
Action theta_action(const Request& request, const ThetaContext& ctx,
                    double theta);

ConstraintInputs post_state(const ThetaContext& ctx, const Action& action);

// Largest theta in [0, 1] whose action keeps the enabled constraints.
// Menus: exact search over tie breakpoints. Linear requests: bisection to
// 1e-6 with at most 60 halvings. Falls back to theta = 0; when all
// constraints are enabled and even theta = 0 fails, throws
// InvariantViolation.
ThetaChoice select_theta(const Request& request, const ThetaContext& ctx);

struct LaConfig {
  double epsilon = 0.1;
  MultiplierSource advice = MultiplierSequence{};
  MultiplierSource rob = RobustSource{};
  ConstraintMask mask;
  // Play the advice's action every round and never enter an endgame.
  bool mirror_advice = false;
};

struct LaRound {
  int t = 0;
  Endgame endgame = Endgame::none;
  double theta = 0.0;  // -1 in endgame rounds
  double lambda = 0.0;
  double lambda_rob = 0.0;
  double lambda_adv = 0.0;
  Action adv_action;
  bool theta_zero_ok = true;
  double beta = 0.0;
  double reward = 0.0;      // F_{1:t}
  double adv_reward = 0.0;  // F^ADV_{1:t}
};

struct LaState {
  InstanceParams params;
  LaConfig config;
  int t = 0;
  Ledger alg;
  SimulatedPolicy adv;
  SimulatedPolicy rob;
  Endgame endgame = Endgame::none;

  double beta() const { return alg.consumption - adv.ledger().consumption; }
};

LaState la_init(const InstanceParams& params, const LaConfig& config);

struct LaStep {
  Action action;
  LaRound round;
};

// Advances the state in place: both simulations, the endgame check, the
// weight search, and the algorithm's own ledger.
LaStep la_step(LaState& state, const Request& request);

StepRecord la_record(const LaState& after, const LaStep& step);

struct LaRun {
  Trajectory trajectory;
  std::vector<LaRound> rounds;
  double adv_reward = 0.0;
  double adv_consumption = 0.0;
  int theta_zero_failures = 0;
};

LaRun run_learning_augmented(const Instance& instance, const LaConfig& config);

}  // namespace ora
