#pragma once

#include <cstdint>
#include <random>

#include "ora/core_model.hpp"

namespace ora {

// Uniform double in [0, 1) from the top 53 bits; unlike
// std::uniform_real_distribution this is identical across standard libraries.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [lo, hi] by rejection, again library-independent.
std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi);

// T linear requests with a_t ~ U[0,1), delta = b_low, x in [0, 1].
// f_bar = 1, b_bar = 1 + delta, u = 1, l = 0, lambda_max = 1 / rho.
Instance gen_stochastic_linear(int horizon, double rho, double delta,
                               std::uint64_t seed);

struct MenuFamily {
  int horizon = 50;
  double rho = 0.5;
  int menu_size = 3;    // random actions per round, besides do-nothing
  double l = 0.5;
  double u = 2.0;
  double quantum = 0.25;
  int low_quanta = 1;   // b_low = low_quanta * quantum
  int high_quanta = 4;  // b_bar = high_quanta * quantum
  // One action per grid level from b_low to b_bar instead of random levels.
  bool full_grid = false;
};

// Menus on the quantum grid with rewards in [l b, u b]. The do-nothing
// action (l * b_low, b_low) is always present. f_bar = u * b_bar and
// lambda_max = f_bar / rho; density bounds are enforced.
Instance gen_finite_menu_random(const MenuFamily& family, std::uint64_t seed);

InstanceParams menu_family_params(const MenuFamily& family);

// Every grid level from b_low to b_bar at a common density.
FiniteMenu density_menu(const InstanceParams& params, double quantum,
                        double density);

// Adaptive stream: density-l menus until the observed policy can no longer
// afford b_low, density-u menus afterwards. Only the policy's remaining
// budget is consulted. A positive `switch_fraction` switches earlier, as
// soon as the remaining budget drops to that fraction of B.
class SwitchAdversary {
 public:
  SwitchAdversary(const InstanceParams& params, double quantum,
                  double switch_fraction = 0.0);

  Request next(const Budget& policy_budget);
  bool switched() const { return switched_; }
  int switch_round() const { return switch_round_; }

 private:
  InstanceParams params_;
  double quantum_;
  double switch_fraction_;
  bool switched_ = false;
  int rounds_ = 0;
  int switch_round_ = -1;
};

// Parameters of the switch stress test: b_low = quantum, menus on the
// quantum grid, density bounds [l, u].
InstanceParams switch_params(int horizon, double rho, double b_low,
                             double b_bar, double l, double u);

}  // namespace ora
