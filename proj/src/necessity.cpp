#include "ora/necessity.hpp"

#include "ora/generators.hpp"

namespace ora {

std::string_view to_string(ConsistencyConstraint c) {
  switch (c) {
    case ConsistencyConstraint::remaining_tight: return "remaining_tight";
    case ConsistencyConstraint::remaining_rich: return "remaining_rich";
    case ConsistencyConstraint::lead: return "lead";
  }
  return "unknown";
}

ConstraintMask ignoring(ConsistencyConstraint c) {
  ConstraintMask m;
  switch (c) {
    case ConsistencyConstraint::remaining_tight: m.remaining_tight = false; break;
    case ConsistencyConstraint::remaining_rich: m.remaining_rich = false; break;
    case ConsistencyConstraint::lead: m.lead = false; break;
  }
  return m;
}

LaConfig NecessityScenario::variant() const {
  LaConfig v = config;
  v.mask = ignoring(constraint);
  return v;
}

namespace {

std::optional<double> margin_of(const ConstraintMargins& m,
                                ConsistencyConstraint c) {
  switch (c) {
    case ConsistencyConstraint::remaining_tight: return m.remaining_tight;
    case ConsistencyConstraint::remaining_rich: return m.remaining_rich;
    case ConsistencyConstraint::lead: return m.lead;
  }
  return std::nullopt;
}

}  // namespace

NecessityInstance necessity_adversary(const NecessityScenario& sc,
                                      const LaConfig& tested) {
  const InstanceParams& p = sc.params;
  LaState state = la_init(p, tested);
  for (const Request& r : sc.prefix) la_step(state, r);

  ConstraintInputs in;
  in.reward = state.alg.reward;
  in.adv_reward = state.adv.ledger().reward;
  in.remaining = state.alg.remaining();
  in.rounds_left = p.horizon - state.t;
  in.beta = state.beta();
  const std::optional<double> margin =
      margin_of(constraint_margins(in, p, tested.epsilon), sc.constraint);
  if (!margin || *margin >= 0.0) throw NothingToFalsify();

  NecessityInstance out;
  out.margin = *margin;
  out.prefix_rounds = static_cast<int>(sc.prefix.size());
  out.instance.params = p;
  out.instance.quantum = sc.quantum;
  out.instance.requests = sc.prefix;

  const FiniteMenu low = density_menu(p, sc.quantum, p.l);
  const FiniteMenu high = density_menu(p, sc.quantum, p.u);
  bool forced = sc.constraint == ConsistencyConstraint::remaining_tight;
  while (state.t < p.horizon) {
    Request r = low;
    if (forced) {
      r = FiniteMenu{{Action{0, p.l * p.b_low, p.b_low, 0.0}}};
      forced = false;
    } else if (sc.constraint == ConsistencyConstraint::lead &&
               state.alg.remaining() < p.b_low) {
      r = high;
    }
    la_step(state, r);
    out.instance.requests.push_back(std::move(r));
  }
  return out;
}

namespace {

InstanceParams scenario_params(int horizon, double budget, double l, double u,
                               double epsilon) {
  InstanceParams p;
  p.horizon = horizon;
  p.budget = budget;
  p.b_low = 0.25;
  p.b_bar = 1.0;
  p.f_bar = u * p.b_bar;
  p.lambda_max = p.f_bar / p.rho();
  p.l = l;
  p.u = u;
  p.epsilon = epsilon;
  p.density_bounds = true;
  return p;
}

}  // namespace

// The algorithm spends at full rate while the advice idles, so it leads the
// advice by a wide margin with less than b_bar left.
NecessityScenario lead_scenario() {
  NecessityScenario sc;
  sc.constraint = ConsistencyConstraint::lead;
  sc.params = scenario_params(16, 8.5, 0.5, 4.0, 0.1);
  for (int t = 0; t < 8; ++t)
    sc.prefix.push_back(density_menu(sc.params, sc.quantum, 1.0));
  sc.config.epsilon = sc.params.epsilon;
  sc.config.advice = constant_multiplier(3.0, sc.params.horizon);
  sc.config.rob = constant_multiplier(0.0, sc.params.horizon);
  return sc;
}

// Both idle for 13 rounds; then the advice grabs a dense full-size action
// while the robust side idles, leaving the algorithm budget-rich and behind.
NecessityScenario remaining_rich_scenario() {
  NecessityScenario sc;
  sc.constraint = ConsistencyConstraint::remaining_rich;
  sc.params = scenario_params(40, 30.0, 0.5, 4.0, 0.1);
  for (int t = 0; t < 13; ++t)
    sc.prefix.push_back(density_menu(sc.params, sc.quantum, sc.params.l));
  sc.prefix.push_back(density_menu(sc.params, sc.quantum, sc.params.u));
  std::vector<double> adv(sc.params.horizon, 0.0);
  for (int t = 0; t < 13; ++t) adv[t] = 100.0;
  sc.config.epsilon = sc.params.epsilon;
  sc.config.advice = MultiplierSequence{adv};
  sc.config.rob = constant_multiplier(100.0, sc.params.horizon);
  return sc;
}

// Four idle rounds, then two rounds where the algorithm and the advice swap
// roles: equal consumption (no lead), budget exactly T_rem * b_bar, and the
// algorithm collects the cheaper pair of rewards.
NecessityScenario remaining_tight_scenario() {
  NecessityScenario sc;
  sc.constraint = ConsistencyConstraint::remaining_tight;
  sc.params = scenario_params(8, 4.25, 1.0, 2.0, 0.1);
  for (int t = 0; t < 4; ++t)
    sc.prefix.push_back(density_menu(sc.params, sc.quantum, 1.0));
  sc.prefix.push_back(density_menu(sc.params, sc.quantum, 2.0));
  sc.prefix.push_back(density_menu(sc.params, sc.quantum, 1.0));
  std::vector<double> adv(sc.params.horizon, 0.0), rob(sc.params.horizon, 0.0);
  for (int t = 0; t < 4; ++t) adv[t] = rob[t] = 10.0;
  rob[4] = 10.0;  // robust side idles on the dense round
  adv[5] = 10.0;  // advice idles on the plain round
  sc.config.epsilon = sc.params.epsilon;
  sc.config.advice = MultiplierSequence{adv};
  sc.config.rob = MultiplierSequence{rob};
  return sc;
}

}  // namespace ora
