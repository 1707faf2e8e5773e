#include "ora/learning_augmented.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ora {

MultiplierSequence constant_multiplier(double lambda, int horizon) {
  return MultiplierSequence{std::vector<double>(horizon, lambda)};
}

SimulatedPolicy::SimulatedPolicy(MultiplierSource source,
                                 const InstanceParams& params,
                                 bool freeze_when_depleted)
    : source_(std::move(source)),
      params_(params),
      freeze_when_depleted_(freeze_when_depleted) {
  ledger_.total = params.budget;
  if (const auto* seq = std::get_if<MultiplierSequence>(&source_)) {
    if (static_cast<int>(seq->lambdas.size()) < params.horizon)
      throw std::invalid_argument("multiplier sequence shorter than T");
    for (double l : seq->lambdas)
      if (!(l >= 0.0)) throw std::invalid_argument("multipliers must be >= 0");
  } else {
    const auto& rs = std::get<RobustSource>(source_);
    const double l1 = rs.lambda_1 > 0.0 ? rs.lambda_1 : params.lambda_max / 2.0;
    const double eta = rs.eta ? *rs.eta : default_stepsize(params.horizon);
    robust_ = robust_init(params, l1, eta);
  }
}

double SimulatedPolicy::current_lambda() const {
  if (frozen_) return frozen_lambda_;
  if (robust_) return robust_->lambda;
  return std::get<MultiplierSequence>(source_).lambdas[ledger_.rounds];
}

SimulatedPolicy::Move SimulatedPolicy::step(const Request& request) {
  Move m;
  m.lambda = current_lambda();
  if (robust_ && !frozen_) {
    RobustStep rs = robust_step(*robust_, request);
    m.action = rs.action;
    robust_ = std::move(rs.next);
  } else {
    m.action = best_response(request, m.lambda, ledger_.budget());
  }
  ledger_.record(m.action);
  if (freeze_when_depleted_ && !frozen_ &&
      ledger_.remaining() < params_.b_low) {
    frozen_ = true;
    frozen_lambda_ = m.lambda;
  }
  return m;
}

ConstraintMargins constraint_margins(const ConstraintInputs& in,
                                     const InstanceParams& p, double epsilon) {
  ConstraintMargins m;
  const double base = (1.0 + epsilon) * in.reward;
  const double T_rem = static_cast<double>(in.rounds_left);
  if (in.remaining <= T_rem * p.b_bar) {
    m.remaining_tight =
        base + epsilon * p.l * (in.remaining - p.b_bar + p.b_low) -
        in.adv_reward;
  } else {
    m.remaining_rich = base + epsilon * p.l * p.b_bar * T_rem - in.adv_reward;
  }
  if (in.beta > 0.0) {
    m.lead = base + epsilon * p.l * in.remaining -
             (in.adv_reward + p.u * (std::min(p.b_bar, in.remaining) + in.beta));
  }
  return m;
}

bool constraints_ok(const ConstraintInputs& in, const InstanceParams& params,
                    double epsilon, const ConstraintMask& mask) {
  const ConstraintMargins m = constraint_margins(in, params, epsilon);
  if (mask.remaining_tight && m.remaining_tight && *m.remaining_tight < 0.0)
    return false;
  if (mask.remaining_rich && m.remaining_rich && *m.remaining_rich < 0.0)
    return false;
  if (mask.lead && m.lead && *m.lead < 0.0) return false;
  return true;
}

Endgame check_endgame(const EndgameInputs& in, const InstanceParams& p) {
  const double rounds_left = static_cast<double>(p.horizon - in.t + 1);
  if (in.remaining > rounds_left * p.b_bar) return Endgame::rich;
  if (in.remaining <= p.b_bar && in.beta > 0.0) return Endgame::poor;
  if (in.adv_remaining < p.b_low) return Endgame::no_advice;
  if (in.t == p.horizon) return Endgame::times_up;
  return Endgame::none;
}

ConstraintInputs post_state(const ThetaContext& ctx, const Action& action) {
  const Budget after = ctx.budget.after(action.consumption);
  ConstraintInputs in;
  in.reward = ctx.reward + action.reward;
  in.adv_reward = ctx.adv_reward;
  in.remaining = after.remaining();
  in.rounds_left = ctx.params.horizon - ctx.t;
  in.beta = after.spent() - ctx.adv_consumption;
  return in;
}

Action theta_action(const Request& request, const ThetaContext& ctx,
                    double theta) {
  if (theta == 0.0) {
    if (!ctx.adv_action.is_null() &&
        ctx.budget.admits(ctx.adv_action.consumption))
      return ctx.adv_action;
    return best_response(request, ctx.lambda_adv, ctx.budget);
  }
  const double lambda =
      theta * ctx.lambda_rob + (1.0 - theta) * ctx.lambda_adv;
  return best_response(request, lambda, ctx.budget);
}

namespace {

double blend(const ThetaContext& ctx, double theta) {
  return theta * ctx.lambda_rob + (1.0 - theta) * ctx.lambda_adv;
}

bool passes(const ThetaContext& ctx, const Action& a) {
  return constraints_ok(post_state(ctx, a), ctx.params, ctx.epsilon, ctx.mask);
}

// Weights in (0, 1) at which two affordable actions tie.
std::vector<double> menu_breakpoints(const FiniteMenu& menu,
                                     const ThetaContext& ctx) {
  std::vector<double> out;
  const double span = ctx.lambda_rob - ctx.lambda_adv;
  if (span == 0.0) return out;
  std::vector<const Action*> feasible;
  for (const Action& a : menu.actions)
    if (ctx.budget.admits(a.consumption)) feasible.push_back(&a);
  for (std::size_t i = 0; i < feasible.size(); ++i) {
    for (std::size_t j = i + 1; j < feasible.size(); ++j) {
      const Action& ai = *feasible[i];
      const Action& aj = *feasible[j];
      if (ai.consumption == aj.consumption) continue;
      const double lam =
          (ai.reward - aj.reward) / (ai.consumption - aj.consumption);
      const double theta = (lam - ctx.lambda_adv) / span;
      if (theta > 0.0 && theta < 1.0) out.push_back(theta);
    }
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Largest weight in (lo, hi) still playing `target`, given that `lo` plays
// it and `hi` does not.
double last_weight_playing(const Request& request, const ThetaContext& ctx,
                           const Action& target, double lo, double hi) {
  for (int i = 0; i < 200 && lo < hi; ++i) {
    const double mid = lo + (hi - lo) / 2.0;
    if (mid <= lo || mid >= hi) break;
    if (theta_action(request, ctx, mid) == target)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

ThetaChoice choose(const ThetaContext& ctx,
                   double theta, const Action& action, bool theta_zero_ok) {
  return ThetaChoice{theta, theta == 0.0 ? ctx.lambda_adv : blend(ctx, theta),
                     action, theta_zero_ok};
}

std::optional<ThetaChoice> search_menu(const Request& request,
                                       const FiniteMenu& menu,
                                       const ThetaContext& ctx,
                                       bool theta_zero_ok) {
  // Walk downward from 1: each breakpoint, and the open stretch below it
  // whose (constant) action may not be attained at the breakpoint itself.
  std::vector<double> points = menu_breakpoints(menu, ctx);
  points.insert(points.begin(), 1.0);
  points.push_back(0.0);
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    const double upper = points[k];
    const Action at_upper = theta_action(request, ctx, upper);
    if (passes(ctx, at_upper)) return choose(ctx, upper, at_upper, theta_zero_ok);
    const double lower = points[k + 1];
    const double mid = lower + (upper - lower) / 2.0;
    if (!(mid > lower && mid < upper)) continue;
    const Action inside = theta_action(request, ctx, mid);
    if (inside == at_upper || !passes(ctx, inside)) continue;
    const double theta = last_weight_playing(request, ctx, inside, mid, upper);
    return choose(ctx, theta, inside, theta_zero_ok);
  }
  return std::nullopt;
}

std::optional<ThetaChoice> search_linear(const Request& request,
                                         const ThetaContext& ctx,
                                         bool theta_zero_ok) {
  const Action at_one = theta_action(request, ctx, 1.0);
  if (passes(ctx, at_one)) return choose(ctx, 1.0, at_one, theta_zero_ok);
  double lo = 0.0, hi = 1.0;
  Action lo_action = theta_action(request, ctx, 0.0);
  for (int i = 0; i < 60 && hi - lo > 1e-6; ++i) {
    const double mid = lo + (hi - lo) / 2.0;
    const Action a = theta_action(request, ctx, mid);
    if (passes(ctx, a)) {
      lo = mid;
      lo_action = a;
    } else {
      hi = mid;
    }
  }
  if (lo == 0.0) return std::nullopt;
  return choose(ctx, lo, lo_action, theta_zero_ok);
}

}  // namespace

ThetaChoice select_theta(const Request& request, const ThetaContext& ctx) {
  const Action follow = theta_action(request, ctx, 0.0);
  const bool zero_ok = passes(ctx, follow);
  if (!zero_ok && ctx.mask.all()) {
    std::ostringstream msg;
    msg << "following the advice breaks the consistency constraints at round "
        << ctx.t;
    throw InvariantViolation(msg.str());
  }
  std::optional<ThetaChoice> found;
  if (const auto* menu = std::get_if<FiniteMenu>(&request))
    found = search_menu(request, *menu, ctx, zero_ok);
  else
    found = search_linear(request, ctx, zero_ok);
  if (found) return *found;
  return ThetaChoice{0.0, ctx.lambda_adv, follow, zero_ok};
}

LaState la_init(const InstanceParams& params, const LaConfig& config) {
  if (config.epsilon < 0.0) throw std::invalid_argument("epsilon must be >= 0");
  LaState s{params,
            config,
            0,
            Ledger{params.budget},
            SimulatedPolicy(config.advice, params, false),
            SimulatedPolicy(config.rob, params, true),
            Endgame::none};
  return s;
}

LaStep la_step(LaState& s, const Request& request) {
  const int t = s.t + 1;
  if (s.endgame == Endgame::none && !s.config.mirror_advice) {
    EndgameInputs eg;
    eg.t = t;
    eg.remaining = s.alg.remaining();
    eg.beta = s.beta();
    eg.adv_remaining = s.adv.ledger().remaining();
    s.endgame = check_endgame(eg, s.params);
  }

  const SimulatedPolicy::Move adv = s.adv.step(request);
  const SimulatedPolicy::Move rob = s.rob.step(request);

  LaStep out;
  LaRound& r = out.round;
  r.t = t;
  r.endgame = s.endgame;
  r.lambda_rob = rob.lambda;
  r.lambda_adv = adv.lambda;
  r.adv_action = adv.action;

  if (s.endgame != Endgame::none) {
    r.theta = -1.0;
    r.lambda = 0.0;
    out.action = best_response(request, 0.0, s.alg.budget());
  } else {
    ThetaContext ctx;
    ctx.params = s.params;
    ctx.epsilon = s.config.epsilon;
    ctx.mask = s.config.mask;
    ctx.t = t;
    ctx.budget = s.alg.budget();
    ctx.reward = s.alg.reward;
    ctx.adv_reward = s.adv.ledger().reward;
    ctx.adv_consumption = s.adv.ledger().consumption;
    ctx.lambda_rob = rob.lambda;
    ctx.lambda_adv = adv.lambda;
    ctx.adv_action = adv.action;
    if (s.config.mirror_advice) {
      r.theta = 0.0;
      r.lambda = adv.lambda;
      out.action = theta_action(request, ctx, 0.0);
      r.theta_zero_ok = passes(ctx, out.action);
    } else {
      const ThetaChoice c = select_theta(request, ctx);
      r.theta = c.theta;
      r.lambda = c.lambda;
      r.theta_zero_ok = c.theta_zero_ok;
      out.action = c.action;
    }
  }

  if (!s.alg.budget().admits(out.action.consumption))
    throw InvariantViolation("learning-augmented action exceeds the budget");
  s.alg.record(out.action);
  s.t = t;
  r.beta = s.beta();
  r.reward = s.alg.reward;
  r.adv_reward = s.adv.ledger().reward;
  return out;
}

StepRecord la_record(const LaState& after, const LaStep& step) {
  StepRecord rec;
  rec.t = step.round.t;
  rec.lambda = step.round.lambda;
  rec.action = step.action;
  rec.cum_reward = after.alg.reward;
  rec.cum_consumption = after.alg.consumption;
  rec.remaining = after.alg.remaining();
  rec.endgame = step.round.endgame;
  return rec;
}

LaRun run_learning_augmented(const Instance& instance, const LaConfig& config) {
  LaState s = la_init(instance.params, config);
  LaRun run;
  run.trajectory.policy = "learning_augmented";
  for (const Request& r : instance.requests) {
    const LaStep step = la_step(s, r);
    run.trajectory.steps.push_back(la_record(s, step));
    if (!step.round.theta_zero_ok && step.round.endgame == Endgame::none)
      ++run.theta_zero_failures;
    run.rounds.push_back(step.round);
  }
  run.adv_reward = s.adv.ledger().reward;
  run.adv_consumption = s.adv.ledger().consumption;
  return run;
}

}  // namespace ora
