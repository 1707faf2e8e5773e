#pragma once

#include <deque>

#include "ora/core_model.hpp"

namespace ora {

// Plain projected subgradient step on the multiplier, box [0, lambda_max].
struct OmdState {
  InstanceParams params;
  int t = 0;
  double eta = 0.0;
  double lambda = 0.0;
  Ledger ledger;
};

OmdState omd_init(const InstanceParams& params, double lambda_1, double eta);

struct OmdStep {
  Action action;
  OmdState next;
};

OmdStep omd_step(const OmdState& state, const Request& request);

// Average of per-round reward/consumption ratios over the last `window`
// non-null rounds (window 0 = full history).
struct RoaState {
  InstanceParams params;
  int t = 0;
  int window = 0;
  std::deque<double> ratios;
  double ratio_sum = 0.0;
  long long ratio_count = 0;
  double lambda = 0.0;
  Ledger ledger;
};

RoaState roa_init(const InstanceParams& params, double lambda_1, int window);

struct RoaStep {
  Action action;
  RoaState next;
};

RoaStep roa_step(const RoaState& state, const Request& request);

// Mean of the most recent `window` ratios (0 = all of them).
double average_of_ratios(const std::deque<double>& ratios, int window);

Action static_policy_step(double lambda_fixed, const Request& request,
                          const Budget& budget);

inline Action greedy_step(const Request& request, const Budget& budget) {
  return static_policy_step(0.0, request, budget);
}

}  // namespace ora
