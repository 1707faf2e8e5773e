#include "ora/offline_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ora/dp_kernels.hpp"

namespace ora {

namespace {

enum class Family { linear, menu };

Family family_of(const Instance& inst) {
  bool any_linear = false, any_menu = false;
  for (const Request& r : inst.requests) {
    if (std::holds_alternative<LinearThreshold>(r))
      any_linear = true;
    else
      any_menu = true;
  }
  if (any_linear && any_menu)
    throw OracleError("mixed request families are not supported");
  return any_linear ? Family::linear : Family::menu;
}

void check_feasible(const Instance& inst) {
  if (static_cast<int>(inst.requests.size()) != inst.params.horizon)
    throw OracleError("number of requests differs from T");
  double floor_total = 0.0;
  for (const Request& r : inst.requests) floor_total += min_consumption(r);
  if (floor_total > inst.params.budget * (1.0 + 1e-12))
    throw OracleError("infeasible instance: T * b_low exceeds B");
}

OfflineSolution solve_linear(const Instance& inst) {
  const auto n = inst.requests.size();
  double capacity = inst.params.budget;
  for (const Request& r : inst.requests)
    capacity -= std::get<LinearThreshold>(r).delta;
  capacity = std::max(capacity, 0.0);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::get<LinearThreshold>(inst.requests[i]).a >
           std::get<LinearThreshold>(inst.requests[j]).a;
  });

  OfflineSolution sol;
  sol.method = "fractional";
  sol.actions.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    const auto& lin = std::get<LinearThreshold>(inst.requests[t]);
    sol.actions[t] = Action{0, 0.0, lin.delta, 0.0};
  }
  for (std::size_t t : order) {
    const auto& lin = std::get<LinearThreshold>(inst.requests[t]);
    if (lin.a <= 0.0 || capacity <= 0.0) break;
    const double x = std::min(lin.x_max, capacity);
    capacity -= x;
    sol.actions[t] =
        Action{x == lin.x_max ? 1 : 2, lin.a * x, lin.delta + x, x};
  }
  for (const Action& a : sol.actions) sol.value += a.reward;
  return sol;
}

struct GridMenus {
  int K = 0;
  std::vector<std::vector<int>> costs;
  std::vector<std::vector<double>> rewards;
};

GridMenus to_grid(const Instance& inst, double q) {
  if (!(q > 0.0)) throw OracleError("grid mismatch: quantum must be > 0");
  GridMenus g;
  g.K = static_cast<int>(std::floor(inst.params.budget / q + 1e-9));
  for (const Request& r : inst.requests) {
    const auto& menu = std::get<FiniteMenu>(r);
    if (menu.actions.empty()) throw OracleError("empty menu");
    if (menu.actions.size() >= kNoChoice)
      throw OracleError("menus are limited to 254 actions");
    std::vector<int> c;
    std::vector<double> f;
    for (const Action& a : menu.actions) {
      const double k = std::round(a.consumption / q);
      if (std::abs(k * q - a.consumption) > 1e-9 * std::max(1.0, a.consumption))
        throw OracleError("grid mismatch: consumption " +
                          std::to_string(a.consumption) +
                          " is not a multiple of the quantum");
      c.push_back(static_cast<int>(k));
      f.push_back(a.reward);
    }
    g.costs.push_back(std::move(c));
    g.rewards.push_back(std::move(f));
  }
  return g;
}

OfflineSolution solve_dp(const Instance& inst, double q,
                         const OracleOptions& options) {
  const GridMenus g = to_grid(inst, q);
  const int T = static_cast<int>(inst.requests.size());
  const std::size_t width = static_cast<std::size_t>(g.K) + 1;
  const bool keep_choices =
      static_cast<std::size_t>(T) * width <= options.max_choice_cells;

  std::vector<double> prev(width, kUnreachable), next(width);
  prev[0] = 0.0;
  std::vector<std::uint8_t> choices;
  if (keep_choices) choices.resize(static_cast<std::size_t>(T) * width);

  for (int t = 0; t < T; ++t) {
    DpRound round{g.costs[t], g.rewards[t]};
    std::uint8_t* ch = keep_choices ? choices.data() + t * width : nullptr;
    if (options.parallel)
      relax_round_parallel(prev.data(), next.data(), ch, round, g.K);
    else
      relax_round_serial(prev.data(), next.data(), ch, round, g.K);
    std::swap(prev, next);
  }

  OfflineSolution sol;
  sol.method = "dp";
  int best_s = -1;
  for (int s = 0; s <= g.K; ++s)
    if (prev[s] != kUnreachable && (best_s < 0 || prev[s] > prev[best_s]))
      best_s = s;
  if (best_s < 0) throw OracleError("infeasible instance: no feasible plan");
  sol.value = prev[best_s];

  if (keep_choices) {
    sol.actions.resize(T);
    int s = best_s;
    for (int t = T - 1; t >= 0; --t) {
      const std::uint8_t j = choices[t * width + s];
      if (j == kNoChoice) throw InvariantViolation("broken DP backtrack");
      sol.actions[t] = std::get<FiniteMenu>(inst.requests[t]).actions[j];
      s -= g.costs[t][j];
    }
    // Report the value as the plain float sum of the chosen rewards.
    sol.value = 0.0;
    for (const Action& a : sol.actions) sol.value += a.reward;
  }
  return sol;
}

void enumerate(const Instance& inst, std::size_t t, double spent,
               double reward, std::vector<Action>& current,
               std::vector<Action>& best, double& best_value, bool& found) {
  if (t == inst.requests.size()) {
    if (!found || reward > best_value) {
      best_value = reward;
      best = current;
      found = true;
    }
    return;
  }
  for (const Action& a : std::get<FiniteMenu>(inst.requests[t]).actions) {
    if (spent + a.consumption > inst.params.budget * (1.0 + 1e-12)) continue;
    current[t] = a;
    enumerate(inst, t + 1, spent + a.consumption, reward + a.reward, current,
              best, best_value, found);
  }
}

OfflineSolution solve_enumeration(const Instance& inst) {
  std::vector<Action> current(inst.requests.size()), best;
  double best_value = 0.0;
  bool found = false;
  enumerate(inst, 0, 0.0, 0.0, current, best, best_value, found);
  if (!found) throw OracleError("infeasible instance: no feasible plan");
  OfflineSolution sol;
  sol.method = "enumeration";
  sol.actions = std::move(best);
  sol.value = best_value;
  return sol;
}

}  // namespace

double enumerate_opt(const Instance& instance) {
  check_feasible(instance);
  if (family_of(instance) != Family::menu)
    throw OracleError("enumeration needs finite menus");
  return solve_enumeration(instance).value;
}

OfflineSolution solve_opt(const Instance& instance,
                          const OracleOptions& options) {
  check_feasible(instance);
  OfflineSolution sol;
  if (family_of(instance) == Family::linear) {
    sol = solve_linear(instance);
  } else if (instance.quantum) {
    sol = solve_dp(instance, *instance.quantum, options);
  } else if (instance.requests.size() <= 12) {
    sol = solve_enumeration(instance);
  } else {
    throw OracleError("grid mismatch: menus need a declared quantum for T > 12");
  }
  const DualMinimum dm =
      optimal_multiplier(instance, options.multiplier_tolerance);
  sol.lambda_star = dm.lambda;
  sol.dual_at_star = dm.value;
  sol.dual_gap = dm.value - sol.value;
  return sol;
}

double dual_value(double lambda, const Instance& instance) {
  const Budget unlimited = Budget::unlimited();
  double total = lambda * instance.params.budget;
  for (const Request& r : instance.requests)
    total += action_score(best_response(r, lambda, unlimited), lambda);
  return total;
}

DualMinimum optimal_multiplier(const Instance& instance, double tolerance) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = instance.params.lambda_max;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = dual_value(c, instance), fd = dual_value(d, instance);
  while (b - a > tolerance) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = dual_value(c, instance);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = dual_value(d, instance);
    }
  }
  DualMinimum best{fc <= fd ? c : d, std::min(fc, fd)};
  // A piecewise-linear dual often bottoms out at an endpoint or on a flat
  // stretch; prefer the smaller multiplier on ties up to rounding.
  const double at_max = dual_value(instance.params.lambda_max, instance);
  if (at_max < best.value) best = {instance.params.lambda_max, at_max};
  const double at_zero = dual_value(0.0, instance);
  const double slack = 1e-12 * std::max(1.0, std::abs(best.value));
  if (at_zero <= best.value + slack) best = {0.0, at_zero};
  return best;
}

Json solution_to_json(const OfflineSolution& s) {
  Json j;
  j["value"] = s.value;
  j["method"] = s.method;
  j["lambda_star"] = s.lambda_star;
  j["dual_at_star"] = s.dual_at_star;
  j["dual_gap"] = s.dual_gap;
  Json acts = Json::array();
  for (const Action& a : s.actions) acts.push_back(action_to_json(a));
  j["actions"] = std::move(acts);
  return j;
}

}  // namespace ora
