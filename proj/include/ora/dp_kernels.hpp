#pragma once

#include <cstdint>
#include <limits>
#include <span>

namespace ora {

inline constexpr double kUnreachable = -std::numeric_limits<double>::infinity();
inline constexpr std::uint8_t kNoChoice = 0xff;

// One round of the knapsack recursion over spent quanta:
//   next[s] = max_j prev[s - cost[j]] + reward[j]
// for s in [0, K]. Unreachable cells hold -inf. `choice` (optional) receives
// the winning action index per cell, lowest index on ties.
struct DpRound {
  std::span<const int> costs;
  std::span<const double> rewards;
};

inline void relax_cell(const double* prev, double* next, std::uint8_t* choice,
                       const DpRound& round, int s) {
  double best = kUnreachable;
  std::uint8_t arg = kNoChoice;
  for (std::size_t j = 0; j < round.costs.size(); ++j) {
    const int from = s - round.costs[j];
    if (from < 0 || prev[from] == kUnreachable) continue;
    const double v = prev[from] + round.rewards[j];
    if (v > best) {
      best = v;
      arg = static_cast<std::uint8_t>(j);
    }
  }
  next[s] = best;
  if (choice) choice[s] = arg;
}

// Reference implementation.
void relax_round_serial(const double* prev, double* next, std::uint8_t* choice,
                        const DpRound& round, int K);

// OpenMP over cells; every cell runs the same arithmetic as the serial
// version, so results are bitwise identical.
void relax_round_parallel(const double* prev, double* next,
                          std::uint8_t* choice, const DpRound& round, int K);

}  // namespace ora
