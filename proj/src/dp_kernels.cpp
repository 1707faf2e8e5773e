#include "ora/dp_kernels.hpp"

namespace ora {

void relax_round_serial(const double* prev, double* next, std::uint8_t* choice,
                        const DpRound& round, int K) {
  for (int s = 0; s <= K; ++s) relax_cell(prev, next, choice, round, s);
}

void relax_round_parallel(const double* prev, double* next,
                          std::uint8_t* choice, const DpRound& round, int K) {
#pragma omp parallel for schedule(static)
  for (int s = 0; s <= K; ++s) relax_cell(prev, next, choice, round, s);
}

}  // namespace ora
