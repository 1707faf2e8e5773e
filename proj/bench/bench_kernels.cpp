// Serial vs OpenMP timings for the DP relaxation and the sweep cell loop.
// Each pair is also checked for bitwise-identical output.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <random>
#include <vector>

#include "ora/dp_kernels.hpp"
#include "ora/experiment.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double time_ms(F&& f, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    f();
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    if (ms < best) best = ms;
  }
  return best;
}

bool bench_dp(int K, int rounds) {
  std::vector<int> costs = {1, 2, 3, 5, 8, 13};
  std::vector<double> rewards(costs.size());
  std::vector<double> init(K + 1, ora::kUnreachable);
  init[0] = 0.0;

  auto run = [&](bool parallel, std::vector<double>& out) {
    std::vector<double> prev = init, next(K + 1);
    std::vector<std::uint8_t> choice(K + 1);
    std::mt19937_64 local(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < rounds; ++t) {
      for (std::size_t j = 0; j < costs.size(); ++j) rewards[j] = costs[j] * u(local);
      const ora::DpRound round{costs, rewards};
      if (parallel)
        ora::relax_round_parallel(prev.data(), next.data(), choice.data(), round, K);
      else
        ora::relax_round_serial(prev.data(), next.data(), choice.data(), round, K);
      prev.swap(next);
    }
    out = prev;
  };

  std::vector<double> a, b;
  const double serial = time_ms([&] { run(false, a); }, 3);
  const double parallel = time_ms([&] { run(true, b); }, 3);
  const bool same = a.size() == b.size() &&
                    std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
  std::printf("dp_relax   K=%-8d rounds=%-5d serial %9.2f ms  parallel %9.2f ms  speedup %5.2fx  %s\n",
              K, rounds, serial, parallel, serial / parallel,
              same ? "identical" : "MISMATCH");
  return same;
}

bool bench_sweep() {
  ora::ExperimentConfig c;
  c.horizons = {500, 1000, 2000};
  for (std::uint64_t s = 0; s < 8; ++s) c.seeds.push_back(s);
  c.policies = ora::Json::array({ora::Json{{"kind", "robust"}},
                                 ora::Json{{"kind", "omd"}},
                                 ora::Json{{"kind", "roa"}}});
  std::vector<ora::InstanceOutput> a, b;
  const double serial = time_ms([&] { a = ora::run_sweep(c, {false, false}); }, 1);
  const double parallel = time_ms([&] { b = ora::run_sweep(c, {true, false}); }, 1);
  const std::string ja = ora::sweep_to_json(a, ora::aggregate(a)).dump();
  const std::string jb = ora::sweep_to_json(b, ora::aggregate(b)).dump();
  const bool same = ja == jb;
  std::printf("sweep      cells=%-4zu             serial %9.2f ms  parallel %9.2f ms  speedup %5.2fx  %s\n",
              c.horizons.size() * c.seeds.size(), serial, parallel, serial / parallel,
              same ? "identical" : "MISMATCH");
  return same;
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  bool ok = true;
  ok &= bench_dp(1 << 12, 400);
  ok &= bench_dp(1 << 16, 200);
  ok &= bench_dp(1 << 20, 20);
  ok &= bench_sweep();
  return ok ? 0 : 1;
}
