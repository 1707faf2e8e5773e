#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ora {

// Raised when a run breaks one of the algorithmic invariants (budget overrun,
// infeasible fallback, ...). These indicate bugs, never bad user input.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kNullActionId = -1;

// One realized decision. For finite menus `id` indexes the menu; for linear
// requests `amount` carries the chosen level x and `id` is 0 (x = 0),
// 1 (x = x_max) or 2 (x clipped by the remaining budget).
struct Action {
  int id = kNullActionId;
  double reward = 0.0;
  double consumption = 0.0;
  double amount = 0.0;

  bool is_null() const { return id == kNullActionId; }
  friend bool operator==(const Action&, const Action&) = default;
};

// Zero reward, zero consumption. Only emitted once the remaining budget
// cannot cover the calendar-aging floor.
inline constexpr Action null_action() { return Action{}; }

struct FiniteMenu {
  std::vector<Action> actions;
};

// f(x) = a * x, b(x) = delta + x, x in [0, x_max].
struct LinearThreshold {
  double a = 0.0;
  double delta = 0.0;
  double x_max = 1.0;
};

using Request = std::variant<FiniteMenu, LinearThreshold>;

struct InstanceParams {
  double budget = 0.0;  // B
  int horizon = 0;      // T
  double f_bar = 1.0;
  double b_bar = 1.0;
  double b_low = 0.1;
  double lambda_max = 1.0;
  double u = 1.0;
  double l = 0.0;
  double epsilon = 0.1;
  // Enforce l * b <= f <= u * b on every action.
  bool density_bounds = false;

  double rho() const { return budget / static_cast<double>(horizon); }
};

// Builds params with B = rho * T and the default multiplier cap f_bar / rho.
InstanceParams make_params(int horizon, double rho, double f_bar, double b_bar,
                           double b_low);

struct Instance {
  InstanceParams params;
  std::vector<Request> requests;
  // Consumption grid for finite menus; required by the exact DP oracle.
  std::optional<double> quantum;
};

// Remaining-resource ledger. Feasibility is decided on the running sum
// (spent + c <= total) so that the realized cumulative consumption can never
// exceed the total, whatever the rounding of total - spent.
class Budget {
 public:
  explicit Budget(double total, double spent = 0.0)
      : total_(total), spent_(spent) {}

  static Budget unlimited();

  double total() const { return total_; }
  double spent() const { return spent_; }
  double remaining() const { return total_ - spent_; }
  bool admits(double consumption) const {
    return spent_ + consumption <= total_;
  }
  Budget after(double consumption) const {
    return Budget(total_, spent_ + consumption);
  }

 private:
  double total_;
  double spent_;
};

// Running totals of one decision maker (the algorithm or a simulated copy).
struct Ledger {
  double total = 0.0;
  double reward = 0.0;
  double consumption = 0.0;
  int rounds = 0;

  Budget budget() const { return Budget(total, consumption); }
  double remaining() const { return total - consumption; }
  void record(const Action& a) {
    reward += a.reward;
    consumption += a.consumption;
    ++rounds;
  }
};

// argmax over budget-feasible actions of reward - lambda * consumption.
// Ties go to the lowest consumption, then the lowest id. Falls back to the
// null action when nothing is affordable.
Action best_response(const Request& request, double lambda,
                     const Budget& budget);
Action best_response(const Request& request, double lambda, double remaining);

double action_score(const Action& a, double lambda);

// Smallest consumption any action of the request can have.
double min_consumption(const Request& request);
// Largest reward any action of the request can realize (ignoring budget).
double max_reward(const Request& request);

enum class ViolationKind {
  empty_menu,
  missing_do_nothing,
  reward_negative,
  reward_cap,
  consumption_cap,
  calendar_aging_floor,
  density_lower,
  density_upper,
  linear_coefficient,
  linear_offset,
  parameter,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  int round = -1;      // -1 for instance-level problems
  int action_id = -1;  // -1 when not tied to a single action
  std::string message;
};

std::vector<Violation> validate_request(const Request& request,
                                        const InstanceParams& params);
std::vector<Violation> validate_params(const InstanceParams& params);
std::vector<Violation> validate_instance(const Instance& instance);

// ---------------------------------------------------------------------------
// Per-round telemetry shared by every policy.

enum class Endgame { none, rich, poor, no_advice, times_up };

std::string_view to_string(Endgame e);

struct StepRecord {
  int t = 0;  // 1-based round
  double lambda = 0.0;
  double p_bar = 0.0;
  double mu = 0.0;
  Action action;
  double cum_reward = 0.0;
  double cum_consumption = 0.0;
  double remaining = 0.0;
  Endgame endgame = Endgame::none;
};

struct Trajectory {
  std::string policy;
  std::vector<StepRecord> steps;

  double total_reward() const {
    return steps.empty() ? 0.0 : steps.back().cum_reward;
  }
  double total_consumption() const {
    return steps.empty() ? 0.0 : steps.back().cum_consumption;
  }
};

}  // namespace ora
