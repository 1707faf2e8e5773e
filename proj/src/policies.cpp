#include "ora/policies.hpp"

#include "ora/generators.hpp"

namespace ora {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double initial_lambda(double requested, const InstanceParams& p) {
  return requested > 0.0 ? requested : p.lambda_max / 2.0;
}

double stepsize(const std::optional<double>& eta, const InstanceParams& p) {
  return eta ? *eta : default_stepsize(p.horizon);
}

StepRecord plain_record(int t, double lambda, const Action& action,
                        const Ledger& ledger) {
  StepRecord r;
  r.t = t;
  r.lambda = lambda;
  r.action = action;
  r.cum_reward = ledger.reward;
  r.cum_consumption = ledger.consumption;
  r.remaining = ledger.remaining();
  return r;
}

}  // namespace

std::string policy_kind(const PolicySpec& spec) {
  return std::visit(overloaded{
                        [](const RobustConfig&) { return "robust"; },
                        [](const OmdConfig&) { return "omd"; },
                        [](const RoaConfig&) { return "roa"; },
                        [](const StaticConfig&) { return "static"; },
                        [](const GreedyConfig&) { return "greedy"; },
                        [](const LaConfig&) { return "la"; },
                    },
                    spec);
}

PolicyRunner::PolicyRunner(const PolicyConfig& config,
                           const InstanceParams& params)
    : config_(config), params_(params) {
  trajectory_.policy = config.name;
  trajectory_.steps.reserve(params.horizon);
  std::visit(
      overloaded{
          [&](const RobustConfig& c) {
            state_ = robust_init(params, initial_lambda(c.lambda_1, params),
                                 stepsize(c.eta, params));
          },
          [&](const OmdConfig& c) {
            state_ = omd_init(params, initial_lambda(c.lambda_1, params),
                              stepsize(c.eta, params));
          },
          [&](const RoaConfig& c) {
            state_ = roa_init(params, initial_lambda(c.lambda_1, params),
                              c.window);
          },
          [&](const StaticConfig& c) {
            state_ = StaticRun{c.lambda, Ledger{params.budget}};
          },
          [&](const GreedyConfig&) {
            state_ = StaticRun{0.0, Ledger{params.budget}};
          },
          [&](const LaConfig& c) {
            state_ = la_init(params, c);
            la_run_.emplace();
            la_run_->trajectory.policy = config.name;
          },
      },
      config.spec);
}

const StepRecord& PolicyRunner::step(const Request& request) {
  StepRecord rec = std::visit(
      overloaded{
          [&](RobustState& s) {
            RobustStep st = robust_step(s, request);
            StepRecord r = robust_record(s, st.action, st.next);
            s = std::move(st.next);
            return r;
          },
          [&](OmdState& s) {
            const double lambda = s.lambda;
            OmdStep st = omd_step(s, request);
            s = std::move(st.next);
            return plain_record(s.t, lambda, st.action, s.ledger);
          },
          [&](RoaState& s) {
            const double lambda = s.lambda;
            RoaStep st = roa_step(s, request);
            s = std::move(st.next);
            return plain_record(s.t, lambda, st.action, s.ledger);
          },
          [&](StaticRun& s) {
            const Action a = static_policy_step(s.lambda, request, s.ledger.budget());
            s.ledger.record(a);
            return plain_record(s.ledger.rounds, s.lambda, a, s.ledger);
          },
          [&](LaState& s) {
            const LaStep st = la_step(s, request);
            StepRecord r = la_record(s, st);
            la_run_->rounds.push_back(st.round);
            if (!st.round.theta_zero_ok && st.round.endgame == Endgame::none)
              ++la_run_->theta_zero_failures;
            la_run_->adv_reward = s.adv.ledger().reward;
            la_run_->adv_consumption = s.adv.ledger().consumption;
            return r;
          },
      },
      state_);
  if (rec.cum_consumption > params_.budget)
    throw InvariantViolation("policy " + config_.name + " overspent its budget");
  trajectory_.steps.push_back(rec);
  if (la_run_) la_run_->trajectory.steps.push_back(rec);
  return trajectory_.steps.back();
}

Budget PolicyRunner::budget() const {
  return std::visit(overloaded{
                        [](const RobustState& s) { return s.ledger.budget(); },
                        [](const OmdState& s) { return s.ledger.budget(); },
                        [](const RoaState& s) { return s.ledger.budget(); },
                        [](const StaticRun& s) { return s.ledger.budget(); },
                        [](const LaState& s) { return s.alg.budget(); },
                    },
                    state_);
}

double PolicyRunner::next_lambda() const {
  return std::visit(overloaded{
                        [](const RobustState& s) { return s.lambda; },
                        [](const OmdState& s) { return s.lambda; },
                        [](const RoaState& s) { return s.lambda; },
                        [](const StaticRun& s) { return s.lambda; },
                        [this](const LaState&) {
                          return trajectory_.steps.empty()
                                     ? 0.0
                                     : trajectory_.steps.back().lambda;
                        },
                    },
                    state_);
}

double PolicyRunner::eta() const {
  if (const auto* r = std::get_if<RobustState>(&state_)) return r->eta;
  if (const auto* o = std::get_if<OmdState>(&state_)) return o->eta;
  return 0.0;
}

EpisodeResult run_episode(const PolicyConfig& config, const Instance& instance) {
  PolicyRunner runner(config, instance.params);
  for (const Request& r : instance.requests) runner.step(r);
  EpisodeResult out;
  out.trajectory = runner.trajectory();
  out.terminal_lambda = runner.next_lambda();
  out.eta = runner.eta();
  if (runner.la_run()) out.la = *runner.la_run();
  return out;
}

AdaptiveEpisode run_switch_episode(const PolicyConfig& config,
                                   const InstanceParams& params,
                                   double quantum, double switch_fraction) {
  SwitchAdversary adversary(params, quantum, switch_fraction);
  PolicyRunner runner(config, params);
  AdaptiveEpisode out;
  out.instance.params = params;
  out.instance.quantum = quantum;
  out.instance.requests.reserve(params.horizon);
  for (int t = 0; t < params.horizon; ++t) {
    Request r = adversary.next(runner.budget());
    runner.step(r);
    out.instance.requests.push_back(std::move(r));
  }
  out.switch_round = adversary.switch_round();
  out.result.trajectory = runner.trajectory();
  out.result.terminal_lambda = runner.next_lambda();
  out.result.eta = runner.eta();
  if (runner.la_run()) out.result.la = *runner.la_run();
  return out;
}

}  // namespace ora
