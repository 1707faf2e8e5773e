#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ora/core_model.hpp"
#include "ora/instance_io.hpp"

namespace ora {

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OfflineSolution {
  double value = 0.0;
  // Per-round optimal actions; empty when the DP ran in value-only mode.
  std::vector<Action> actions;
  double lambda_star = 0.0;
  double dual_at_star = 0.0;
  double dual_gap = 0.0;  // dual_at_star - value
  std::string method;     // "fractional", "dp" or "enumeration"
};

struct OracleOptions {
  bool parallel = true;
  // Above this many (round, cell) pairs the DP keeps values only and skips
  // the backtracking table.
  std::size_t max_choice_cells = std::size_t{64} << 20;
  double multiplier_tolerance = 1e-6;
};

// Exact optimum of the budgeted problem. Every round plays a real action
// (consumption >= b_low); there is no null relaxation.
// Errors: "grid mismatch" when a menu consumption is off the declared
// quantum (or no quantum is declared and T > 12), "infeasible instance"
// when T * b_low > B, and mixed request families.
OfflineSolution solve_opt(const Instance& instance,
                          const OracleOptions& options = {});

// Exhaustive search over all action combinations (menus only, small T).
double enumerate_opt(const Instance& instance);

// sum_t max_a (f - lambda b) + lambda B, inner max over the full menu.
double dual_value(double lambda, const Instance& instance);

struct DualMinimum {
  double lambda = 0.0;
  double value = 0.0;
};

// Golden-section search of the convex dual on [0, lambda_max].
DualMinimum optimal_multiplier(const Instance& instance,
                               double tolerance = 1e-6);

Json solution_to_json(const OfflineSolution& solution);

}  // namespace ora
