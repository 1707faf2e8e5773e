#include "ora/robust_policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ora {

double default_stepsize(int horizon) {
  if (horizon < 2) throw std::invalid_argument("stepsize needs T >= 2");
  const double T = static_cast<double>(horizon);
  return std::sqrt(std::log(T) / T);
}

RobustState robust_init(const InstanceParams& params, double lambda_1,
                        double eta) {
  if (!(lambda_1 > 0.0)) throw std::invalid_argument("lambda_1 must be > 0");
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be > 0");
  RobustState s;
  s.params = params;
  s.eta = eta;
  s.lambda = lambda_1;
  s.p_bar = lambda_1;
  s.mu = 0.0;
  s.ledger.total = params.budget;
  return s;
}

RobustStep robust_step(const RobustState& state, const Request& request) {
  RobustStep out{best_response(request, state.lambda, state.ledger.budget()),
                 state};
  RobustState& n = out.next;
  n.ledger.record(out.action);
  n.t = state.t + 1;
  // Consumption is >= b_low on every non-null round, so the denominator is
  // positive unless the very first round was already null.
  const double p_bar = n.ledger.consumption > 0.0
                           ? n.ledger.reward / n.ledger.consumption
                           : state.p_bar;
  const double g = state.params.rho() - out.action.consumption;
  n.mu = std::clamp(state.mu - state.eta * g, -p_bar,
                    state.params.lambda_max - p_bar);
  n.p_bar = p_bar;
  n.lambda = p_bar + n.mu;
  return out;
}

StepRecord robust_record(const RobustState& before, const Action& action,
                         const RobustState& after) {
  StepRecord r;
  r.t = after.t;
  r.lambda = before.lambda;
  r.p_bar = before.p_bar;
  r.mu = before.mu;
  r.action = action;
  r.cum_reward = after.ledger.reward;
  r.cum_consumption = after.ledger.consumption;
  r.remaining = after.ledger.remaining();
  return r;
}

double path_length(const std::vector<double>& seq) {
  double total = 0.0;
  for (std::size_t i = 1; i < seq.size(); ++i)
    total += std::abs(seq[i] - seq[i - 1]);
  return total;
}

double path_length(const Trajectory& trajectory) {
  std::vector<double> seq;
  for (std::size_t i = 1; i < trajectory.steps.size(); ++i)
    seq.push_back(trajectory.steps[i].p_bar);
  return path_length(seq);
}

double rolling_average_constant(const InstanceParams& p) {
  return (p.f_bar / p.b_low) * (1.0 + p.b_bar / p.b_low);
}

PathLengthCheck check_path_length(const Trajectory& trajectory,
                                  const InstanceParams& params) {
  PathLengthCheck c;
  const double cp = rolling_average_constant(params);
  c.total = path_length(trajectory);
  c.bound = cp * (std::log(static_cast<double>(params.horizon)) + 1.0);
  // steps[i] holds p_bar_{i+1}; the increment p_{t+1} - p_t for t >= 2.
  for (std::size_t i = 2; i < trajectory.steps.size(); ++i) {
    const double t = static_cast<double>(i);
    const double dp =
        std::abs(trajectory.steps[i].p_bar - trajectory.steps[i - 1].p_bar);
    const double ratio = dp / (cp / t);
    c.worst_step_ratio = std::max(c.worst_step_ratio, ratio);
    if (ratio > 1.0) ++c.step_violations;
  }
  return c;
}

DynamicRegretCheck check_dynamic_regret(const Trajectory& trajectory,
                                        const InstanceParams& params,
                                        double eta) {
  const double rho = params.rho();
  const double lambda_ref = params.f_bar / rho;
  DynamicRegretCheck c;
  std::vector<double> nu;
  nu.reserve(trajectory.steps.size());
  for (const StepRecord& s : trajectory.steps) {
    const double g = rho - s.action.consumption;
    const double nu_t = lambda_ref - s.p_bar;
    c.lhs += g * (s.mu - nu_t);
    nu.push_back(nu_t);
  }
  const double D = params.lambda_max;
  const double G = rho + params.b_bar;
  const double T = static_cast<double>(trajectory.steps.size());
  c.bound = (5.0 * D * D / (2.0 * eta)) * (1.0 + path_length(nu)) +
            eta * T * G * G / 2.0;
  return c;
}

}  // namespace ora
