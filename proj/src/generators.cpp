#include "ora/generators.hpp"

#include <cmath>
#include <stdexcept>

namespace ora {

std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo,
                         std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("empty integer range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(rng());
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return lo + static_cast<std::int64_t>(v % span);
}

Instance gen_stochastic_linear(int horizon, double rho, double delta,
                               std::uint64_t seed) {
  if (!(delta > 0.0 && delta < rho && rho < 1.0))
    throw std::invalid_argument("need 0 < delta < rho < 1");
  if (horizon < 1) throw std::invalid_argument("need T >= 1");
  Instance inst;
  inst.params = make_params(horizon, rho, 1.0, 1.0 + delta, delta);
  inst.params.u = 1.0;
  inst.params.l = 0.0;
  std::mt19937_64 rng(seed);
  inst.requests.reserve(horizon);
  for (int t = 0; t < horizon; ++t)
    inst.requests.push_back(LinearThreshold{uniform01(rng), delta, 1.0});
  return inst;
}

InstanceParams menu_family_params(const MenuFamily& f) {
  if (!(f.quantum > 0.0) || f.low_quanta < 1 || f.high_quanta < f.low_quanta)
    throw std::invalid_argument("bad consumption grid");
  if (f.l < 0.0 || f.u < f.l)
    throw std::invalid_argument("band violation: need 0 <= l <= u");
  const double b_low = f.low_quanta * f.quantum;
  const double b_bar = f.high_quanta * f.quantum;
  if (f.rho < b_low || f.rho > b_bar)
    throw std::invalid_argument("need b_low <= rho <= b_bar");
  InstanceParams p = make_params(f.horizon, f.rho, f.u * b_bar, b_bar, b_low);
  p.l = f.l;
  p.u = f.u;
  p.density_bounds = true;
  return p;
}

FiniteMenu density_menu(const InstanceParams& params, double quantum,
                        double density) {
  FiniteMenu menu;
  int id = 0;
  const int lo = static_cast<int>(std::llround(params.b_low / quantum));
  const int hi = static_cast<int>(std::llround(params.b_bar / quantum));
  for (int k = lo; k <= hi; ++k) {
    const double b = k * quantum;
    menu.actions.push_back(Action{id++, density * b, b, 0.0});
  }
  return menu;
}

Instance gen_finite_menu_random(const MenuFamily& f, std::uint64_t seed) {
  Instance inst;
  inst.params = menu_family_params(f);
  inst.quantum = f.quantum;
  const InstanceParams& p = inst.params;
  std::mt19937_64 rng(seed);
  inst.requests.reserve(f.horizon);
  for (int t = 0; t < f.horizon; ++t) {
    FiniteMenu menu;
    menu.actions.push_back(Action{0, p.l * p.b_low, p.b_low, 0.0});
    auto add = [&](int k) {
      const double b = k * f.quantum;
      const double density = p.l + (p.u - p.l) * uniform01(rng);
      const int id = static_cast<int>(menu.actions.size());
      menu.actions.push_back(Action{id, density * b, b, 0.0});
    };
    if (f.full_grid) {
      for (int k = f.low_quanta; k <= f.high_quanta; ++k) add(k);
    } else {
      for (int i = 0; i < f.menu_size; ++i)
        add(static_cast<int>(uniform_int(rng, f.low_quanta, f.high_quanta)));
    }
    inst.requests.push_back(std::move(menu));
  }
  return inst;
}

InstanceParams switch_params(int horizon, double rho, double b_low,
                             double b_bar, double l, double u) {
  InstanceParams p = make_params(horizon, rho, u * b_bar, b_bar, b_low);
  p.l = l;
  p.u = u;
  p.density_bounds = true;
  return p;
}

SwitchAdversary::SwitchAdversary(const InstanceParams& params, double quantum,
                                 double switch_fraction)
    : params_(params), quantum_(quantum), switch_fraction_(switch_fraction) {
  if (!(params.l > 0.0)) throw std::invalid_argument("switch stream needs l > 0");
}

Request SwitchAdversary::next(const Budget& policy_budget) {
  ++rounds_;
  const double remaining = policy_budget.remaining();
  if (!switched_ && (remaining < params_.b_low ||
                     remaining <= switch_fraction_ * params_.budget)) {
    switched_ = true;
    switch_round_ = rounds_;
  }
  return density_menu(params_, quantum_, switched_ ? params_.u : params_.l);
}

}  // namespace ora
