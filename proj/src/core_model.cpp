#include "ora/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ora {

InstanceParams make_params(int horizon, double rho, double f_bar, double b_bar,
                           double b_low) {
  InstanceParams p;
  p.horizon = horizon;
  p.budget = rho * static_cast<double>(horizon);
  p.f_bar = f_bar;
  p.b_bar = b_bar;
  p.b_low = b_low;
  p.lambda_max = f_bar / rho;
  return p;
}

Budget Budget::unlimited() {
  return Budget(std::numeric_limits<double>::infinity());
}

double action_score(const Action& a, double lambda) {
  return a.reward - lambda * a.consumption;
}

namespace {

bool prefer(const Action& cand, double cand_score, const Action& best,
            double best_score) {
  if (cand_score != best_score) return cand_score > best_score;
  if (cand.consumption != best.consumption)
    return cand.consumption < best.consumption;
  return cand.id < best.id;
}

Action respond(const FiniteMenu& menu, double lambda, const Budget& budget) {
  Action best = null_action();
  double best_score = -std::numeric_limits<double>::infinity();
  bool found = false;
  for (const Action& a : menu.actions) {
    if (!budget.admits(a.consumption)) continue;
    const double s = action_score(a, lambda);
    if (!found || prefer(a, s, best, best_score)) {
      best = a;
      best_score = s;
      found = true;
    }
  }
  return best;
}

Action linear_action(const LinearThreshold& req, double x, int id) {
  return Action{id, req.a * x, req.delta + x, x};
}

Action respond(const LinearThreshold& req, double lambda,
               const Budget& budget) {
  if (!budget.admits(req.delta)) return null_action();
  // Exact tie a == lambda takes the smaller consumption.
  if (!(req.a > lambda) || req.x_max <= 0.0) return linear_action(req, 0.0, 0);
  if (budget.admits(req.delta + req.x_max))
    return linear_action(req, req.x_max, 1);
  double x = std::clamp(budget.remaining() - req.delta, 0.0, req.x_max);
  while (x > 0.0 && !budget.admits(req.delta + x)) x = std::nextafter(x, 0.0);
  if (x <= 0.0) return linear_action(req, 0.0, 0);
  return linear_action(req, x, 2);
}

}  // namespace

Action best_response(const Request& request, double lambda,
                     const Budget& budget) {
  return std::visit([&](const auto& r) { return respond(r, lambda, budget); },
                    request);
}

Action best_response(const Request& request, double lambda, double remaining) {
  return best_response(request, lambda, Budget(remaining));
}

double min_consumption(const Request& request) {
  if (const auto* lin = std::get_if<LinearThreshold>(&request)) return lin->delta;
  const auto& menu = std::get<FiniteMenu>(request);
  double m = std::numeric_limits<double>::infinity();
  for (const Action& a : menu.actions) m = std::min(m, a.consumption);
  return m;
}

double max_reward(const Request& request) {
  if (const auto* lin = std::get_if<LinearThreshold>(&request))
    return std::max(0.0, lin->a * lin->x_max);
  const auto& menu = std::get<FiniteMenu>(request);
  double m = 0.0;
  for (const Action& a : menu.actions) m = std::max(m, a.reward);
  return m;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::empty_menu: return "empty menu";
    case ViolationKind::missing_do_nothing: return "missing do-nothing action";
    case ViolationKind::reward_negative: return "negative reward";
    case ViolationKind::reward_cap: return "reward cap";
    case ViolationKind::consumption_cap: return "consumption cap";
    case ViolationKind::calendar_aging_floor: return "calendar aging floor";
    case ViolationKind::density_lower: return "density lower bound";
    case ViolationKind::density_upper: return "density upper bound";
    case ViolationKind::linear_coefficient: return "linear coefficient";
    case ViolationKind::linear_offset: return "linear offset";
    case ViolationKind::parameter: return "parameter";
  }
  return "unknown";
}

std::string_view to_string(Endgame e) {
  switch (e) {
    case Endgame::none: return "none";
    case Endgame::rich: return "rich";
    case Endgame::poor: return "poor";
    case Endgame::no_advice: return "no_advice";
    case Endgame::times_up: return "times_up";
  }
  return "unknown";
}

namespace {

// Relative slack used when comparing against declared bounds, so that values
// produced by multiplying a density by a consumption are not flagged for the
// last ulp.
constexpr double kBoundSlack = 1e-12;

bool above(double value, double bound) {
  return value > bound + kBoundSlack * std::max(1.0, std::abs(bound));
}

void check_pair(double reward, double consumption, int id,
                const InstanceParams& p, std::vector<Violation>& out) {
  auto report = [&](ViolationKind k, const std::string& detail) {
    std::ostringstream msg;
    msg << to_string(k) << ": action " << id << " (reward " << reward
        << ", consumption " << consumption << ") " << detail;
    out.push_back({k, -1, id, msg.str()});
  };
  if (reward < 0.0) report(ViolationKind::reward_negative, "reward < 0");
  if (above(reward, p.f_bar)) report(ViolationKind::reward_cap, "reward > f_bar");
  if (above(consumption, p.b_bar))
    report(ViolationKind::consumption_cap, "consumption > b_bar");
  if (above(p.b_low, consumption))
    report(ViolationKind::calendar_aging_floor, "consumption < b_low");
  if (p.density_bounds) {
    if (above(p.l * consumption, reward))
      report(ViolationKind::density_lower, "reward < l * consumption");
    if (above(reward, p.u * consumption))
      report(ViolationKind::density_upper, "reward > u * consumption");
  }
}

}  // namespace

std::vector<Violation> validate_request(const Request& request,
                                        const InstanceParams& params) {
  std::vector<Violation> out;
  if (const auto* menu = std::get_if<FiniteMenu>(&request)) {
    if (menu->actions.empty()) {
      out.push_back({ViolationKind::empty_menu, -1, -1, "empty menu"});
      return out;
    }
    bool has_do_nothing = false;
    for (const Action& a : menu->actions) {
      check_pair(a.reward, a.consumption, a.id, params, out);
      if (a.consumption == params.b_low) has_do_nothing = true;
    }
    if (!has_do_nothing)
      out.push_back({ViolationKind::missing_do_nothing, -1, -1,
                     "no action with consumption exactly b_low"});
    return out;
  }
  const auto& lin = std::get<LinearThreshold>(request);
  if (lin.a < 0.0 || above(lin.a * lin.x_max, params.f_bar) || lin.x_max < 0.0)
    out.push_back({ViolationKind::linear_coefficient, -1, -1,
                   "linear request needs 0 <= a * x_max <= f_bar"});
  if (lin.delta != params.b_low)
    out.push_back({ViolationKind::linear_offset, -1, -1,
                   "linear request offset must equal b_low"});
  // Reward and consumption are affine in x; the endpoints cover the range.
  check_pair(0.0, lin.delta, 0, params, out);
  check_pair(lin.a * lin.x_max, lin.delta + lin.x_max, 1, params, out);
  return out;
}

std::vector<Violation> validate_params(const InstanceParams& p) {
  std::vector<Violation> out;
  auto bad = [&](const std::string& msg) {
    out.push_back({ViolationKind::parameter, -1, -1, msg});
  };
  if (p.horizon < 1) bad("T must be >= 1");
  if (!(p.budget > 0.0)) bad("B must be > 0");
  if (!(p.b_low > 0.0)) bad("b_low must be > 0");
  if (p.b_low > p.b_bar) bad("b_low must be <= b_bar");
  if (p.horizon >= 1 && p.budget > 0.0) {
    const double rho = p.rho();
    if (above(p.b_low, rho)) bad("T * b_low must be <= B");
    if (above(rho, p.b_bar)) bad("rho must be <= b_bar");
  }
  if (!(p.lambda_max > 0.0)) bad("lambda_max must be > 0");
  if (p.l < 0.0 || p.l > p.u) bad("need 0 <= l <= u");
  if (p.f_bar < 0.0) bad("f_bar must be >= 0");
  return out;
}

std::vector<Violation> validate_instance(const Instance& instance) {
  std::vector<Violation> out = validate_params(instance.params);
  if (static_cast<int>(instance.requests.size()) != instance.params.horizon) {
    out.push_back({ViolationKind::parameter, -1, -1,
                   "number of requests differs from T"});
  }
  for (std::size_t t = 0; t < instance.requests.size(); ++t) {
    for (Violation v : validate_request(instance.requests[t], instance.params)) {
      v.round = static_cast<int>(t) + 1;
      out.push_back(std::move(v));
    }
  }
  return out;
}

}  // namespace ora
