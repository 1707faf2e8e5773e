#include "ora/metrics.hpp"

#include <sstream>

namespace ora {

BudgetAudit audit_budget(const Trajectory& trajectory,
                         const InstanceParams& params) {
  BudgetAudit audit;
  double reward = 0.0, consumption = 0.0;
  double prev_reward = 0.0, prev_consumption = 0.0;
  auto fail = [&](int t, const std::string& what) {
    if (!audit.ok) return;
    std::ostringstream msg;
    msg << trajectory.policy << " round " << t << ": " << what;
    audit.ok = false;
    audit.message = msg.str();
  };
  for (const StepRecord& s : trajectory.steps) {
    if (s.action.consumption < 0.0 || s.action.reward < 0.0)
      fail(s.t, "negative reward or consumption");
    if (!s.action.is_null() && s.action.consumption < params.b_low)
      fail(s.t, "non-null action below the calendar-aging floor");
    reward += s.action.reward;
    consumption += s.action.consumption;
    if (reward != s.cum_reward || consumption != s.cum_consumption)
      fail(s.t, "recorded totals differ from the replayed actions");
    if (consumption > params.budget) fail(s.t, "budget exceeded");
    if (s.cum_consumption < prev_consumption || s.cum_reward < prev_reward)
      fail(s.t, "cumulative totals decreased");
    prev_reward = s.cum_reward;
    prev_consumption = s.cum_consumption;
  }
  audit.total = consumption;
  return audit;
}

std::optional<int> depletion_round(const Trajectory& trajectory,
                                   const InstanceParams& params) {
  for (const StepRecord& s : trajectory.steps)
    if (s.remaining < params.b_low) return s.t;
  return std::nullopt;
}

Metrics compute_metrics(const EpisodeResult& episode,
                        const OfflineSolution& solution,
                        const InstanceParams& params, double epsilon) {
  const Trajectory& tr = episode.trajectory;
  if (static_cast<int>(tr.steps.size()) != params.horizon)
    throw MetricsError("trajectory length " + std::to_string(tr.steps.size()) +
                       " does not match T = " + std::to_string(params.horizon));
  Metrics m;
  m.policy = tr.policy;
  m.total_reward = tr.total_reward();
  m.opt = solution.value;
  m.regret = m.opt - m.total_reward;
  m.ratio = m.opt > 0.0 ? m.total_reward / m.opt : 1.0;
  m.depletion_round = depletion_round(tr, params);
  m.terminal_lambda = episode.terminal_lambda;
  if (episode.la) {
    m.adv_reward = episode.la->adv_reward;
    m.consistency_margin = (1.0 + epsilon) * m.total_reward - *m.adv_reward;
  }
  return m;
}

Json metrics_to_json(const Metrics& m) {
  Json j;
  j["policy"] = m.policy;
  j["total_reward"] = m.total_reward;
  j["opt"] = m.opt;
  j["regret"] = m.regret;
  j["ratio"] = m.ratio;
  j["depletion_round"] =
      m.depletion_round ? Json(*m.depletion_round) : Json(nullptr);
  j["terminal_lambda"] = m.terminal_lambda;
  if (m.adv_reward) j["adv_reward"] = *m.adv_reward;
  if (m.consistency_margin) j["consistency_margin"] = *m.consistency_margin;
  return j;
}

}  // namespace ora
