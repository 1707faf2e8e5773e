// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ora/experiment.hpp"
#include "ora/generators.hpp"
#include "ora/necessity.hpp"

using namespace ora;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const Outcome& o) {
  std::printf("%s criterion %d: %s (%s)\n", o.pass ? "PASS" : "FAIL", id, title,
              o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Every trajectory produced anywhere is audited here.
struct AuditTally {
  long checked = 0;
  long failed = 0;
  std::string first_failure;

  void add(const Trajectory& tr, const InstanceParams& p) {
    const BudgetAudit a = audit_budget(tr, p);
    ++checked;
    if (!a.ok) {
      if (failed == 0) first_failure = a.message;
      ++failed;
    }
  }
} audits;

// Robust-policy episodes kept for the path-length and dual-regret checks.
struct RobustEpisode {
  Trajectory trajectory;
  InstanceParams params;
  double eta = 0.0;
};
std::vector<RobustEpisode> robust_episodes;

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// ---------------------------------------------------------------------------

Outcome linear_benchmark() {
  const auto t0 = Clock::now();
  const int seeds = 30;
  std::vector<double> robust, omd, roa, opt, roa_lambda;
  int roa_depleted = 0;
  for (int s = 0; s < seeds; ++s) {
    const Figure1Run run = run_figure1(static_cast<std::uint64_t>(s));
    const InstanceParams& p = run.instance.params;
    for (const EpisodeResult* e : {&run.robust, &run.omd, &run.roa})
      audits.add(e->trajectory, p);
    robust_episodes.push_back({run.robust.trajectory, p, run.robust.eta});
    robust.push_back(run.robust.trajectory.total_reward());
    omd.push_back(run.omd.trajectory.total_reward());
    roa.push_back(run.roa.trajectory.total_reward());
    opt.push_back(run.solution.value);
    roa_lambda.push_back(run.roa.terminal_lambda);
    const auto dep = depletion_round(run.roa.trajectory, p);
    if (dep && *dep < p.horizon) ++roa_depleted;
  }
  const double secs = seconds_since(t0);
  const double r = mean(robust), o = mean(omd), a = mean(roa), f = mean(opt);
  const double lam = mean(roa_lambda);
  const bool ordering = r >= o && o >= a && (r - a) >= 0.10 * f;
  const bool near_opt = r >= 0.97 * f;
  const bool roa_ok = lam >= 0.36 && lam <= 0.46 && roa_depleted >= 0.9 * seeds;
  Outcome out;
  out.pass = ordering && near_opt && roa_ok && secs < 60.0;
  out.detail = fmt(
      "mean reward robust %.2f, omd %.2f, roa %.2f, OPT %.2f; robust/OPT %.4f; "
      "roa terminal lambda %.3f, depleted on %d/%d seeds; %.1fs",
      r, o, a, f, r / f, lam, roa_depleted, seeds, secs);
  return out;
}

Outcome regret_scaling() {
  const auto t0 = Clock::now();
  const std::vector<int> horizons = {250, 500, 1000, 2000, 4000};
  std::vector<double> per_t, scaled;
  for (int T : horizons) {
    std::vector<double> regrets;
    for (int s = 0; s < 30; ++s) {
      const Instance inst =
          gen_stochastic_linear(T, 0.1, 0.01, 1000 + static_cast<std::uint64_t>(s));
      const OfflineSolution sol = solve_opt(inst);
      const EpisodeResult ep = run_episode({"robust", RobustConfig{}}, inst);
      audits.add(ep.trajectory, inst.params);
      robust_episodes.push_back({ep.trajectory, inst.params, ep.eta});
      regrets.push_back(sol.value - ep.trajectory.total_reward());
    }
    const double m = mean(regrets);
    per_t.push_back(m / T);
    scaled.push_back(m / std::sqrt(T * std::log(static_cast<double>(T))));
  }
  const double secs = seconds_since(t0);
  bool decreasing = true;
  for (std::size_t i = 1; i < per_t.size(); ++i) decreasing &= per_t[i] < per_t[i - 1];
  const double lo = *std::min_element(scaled.begin(), scaled.end());
  const double hi = *std::max_element(scaled.begin(), scaled.end());
  Outcome out;
  out.pass = decreasing && lo > 0.0 && hi / lo <= 3.0 && secs < 180.0;
  std::string col;
  for (std::size_t i = 0; i < per_t.size(); ++i)
    col += fmt("%s%d:%.5f", i ? " " : "", horizons[i], per_t[i]);
  out.detail = fmt("regret/T %s; regret/sqrt(T ln T) in [%.4f, %.4f], spread %.2f; %.1fs",
                   col.c_str(), lo, hi, hi / lo, secs);
  return out;
}

Outcome path_length_bound() {
  int total_violations = 0, step_violations = 0;
  double worst_total = 0.0, worst_step = 0.0;
  for (const RobustEpisode& e : robust_episodes) {
    const PathLengthCheck c = check_path_length(e.trajectory, e.params);
    if (c.total > c.bound) ++total_violations;
    step_violations += c.step_violations;
    worst_total = std::max(worst_total, c.total / c.bound);
    worst_step = std::max(worst_step, c.worst_step_ratio);
  }
  Outcome out;
  out.pass = !robust_episodes.empty() && total_violations == 0 && step_violations == 0;
  out.detail = fmt("%zu episodes, %d total-bound and %d per-step violations; "
                   "worst total/bound %.2e, worst step/bound %.2e",
                   robust_episodes.size(), total_violations, step_violations,
                   worst_total, worst_step);
  return out;
}

Outcome dynamic_regret_bound() {
  int violations = 0;
  double worst = -1e300;
  for (const RobustEpisode& e : robust_episodes) {
    const DynamicRegretCheck c = check_dynamic_regret(e.trajectory, e.params, e.eta);
    if (!c.ok()) ++violations;
    worst = std::max(worst, c.lhs / c.bound);
  }
  Outcome out;
  out.pass = !robust_episodes.empty() && violations == 0;
  out.detail = fmt("%zu episodes, %d violations; worst lhs/bound %.3e",
                   robust_episodes.size(), violations, worst);
  return out;
}

// Criteria 5 and 6 share one pass over the consistency suite.
struct ConsistencySuite {
  long runs = 0;
  long violations = 0;
  long theta_zero_failures = 0;
  long throws = 0;
  long non_endgame_rounds = 0;
  double worst_margin = 1e300;
  double seconds = 0.0;
};

ConsistencySuite consistency_suite() {
  const auto t0 = Clock::now();
  ConsistencySuite s;
  std::mt19937_64 rng(20240501);
  for (int i = 0; i < 1000; ++i) {
    MenuFamily fam;
    fam.horizon = static_cast<int>(uniform_int(rng, 20, 200));
    fam.l = 0.2 + 0.8 * uniform01(rng);
    fam.u = fam.l + (5.0 - fam.l) * uniform01(rng);
    fam.quantum = 0.25;
    fam.low_quanta = 1;
    fam.high_quanta = static_cast<int>(uniform_int(rng, 2, 6));
    fam.menu_size = static_cast<int>(uniform_int(rng, 1, 4));
    fam.full_grid = (i % 2) == 1;
    fam.rho = fam.quantum * (1.0 + (fam.high_quanta - 1) * uniform01(rng));
    const Instance inst = gen_finite_menu_random(fam, 5000 + static_cast<std::uint64_t>(i));
    const InstanceParams& p = inst.params;

    MultiplierSequence random_advice;
    for (int t = 0; t < p.horizon; ++t)
      random_advice.lambdas.push_back(p.lambda_max * uniform01(rng));
    const std::vector<MultiplierSource> advices = {
        random_advice, constant_multiplier(0.0, p.horizon),
        constant_multiplier(p.lambda_max, p.horizon), RobustSource{}};

    for (const MultiplierSource& adv : advices)
      for (double eps : {0.05, 0.2, 1.0}) {
        LaConfig cfg;
        cfg.epsilon = eps;
        cfg.advice = adv;
        ++s.runs;
        try {
          const LaRun run = run_learning_augmented(inst, cfg);
          audits.add(run.trajectory, p);
          const double margin = (1.0 + eps) * run.trajectory.total_reward() - run.adv_reward;
          s.worst_margin = std::min(s.worst_margin, margin);
          if (margin < -1e-9) ++s.violations;
          s.theta_zero_failures += run.theta_zero_failures;
          for (const LaRound& r : run.rounds)
            if (r.endgame == Endgame::none) ++s.non_endgame_rounds;
        } catch (const InvariantViolation&) {
          ++s.throws;
        }
      }
  }
  s.seconds = seconds_since(t0);
  return s;
}

Outcome consistency(const ConsistencySuite& s) {
  Outcome out;
  out.pass = s.runs == 12000 && s.violations == 0 && s.throws == 0 && s.seconds < 120.0;
  out.detail = fmt("%ld runs, %ld violations, %ld invariant errors, worst (1+eps)F - F_adv %.4f; %.1fs",
                   s.runs, s.violations, s.throws, s.worst_margin, s.seconds);
  return out;
}

Outcome recursive_feasibility(const ConsistencySuite& s) {
  Outcome out;
  out.pass = s.runs > 0 && s.theta_zero_failures == 0 && s.throws == 0;
  out.detail = fmt("%ld non-endgame rounds checked, %ld where following the advice failed",
                   s.non_endgame_rounds, s.theta_zero_failures + s.throws);
  return out;
}

Outcome necessity() {
  Outcome out;
  out.pass = true;
  for (const NecessityScenario& sc :
       {remaining_tight_scenario(), remaining_rich_scenario(), lead_scenario()}) {
    const double eps = sc.config.epsilon;
    std::string part;
    try {
      const NecessityInstance ni = necessity_adversary(sc, sc.variant());
      const LaRun broken = run_learning_augmented(ni.instance, sc.variant());
      const LaRun compliant = run_learning_augmented(ni.instance, sc.config);
      audits.add(broken.trajectory, ni.instance.params);
      audits.add(compliant.trajectory, ni.instance.params);
      const double gb = (1.0 + eps) * broken.trajectory.total_reward() - broken.adv_reward;
      const double gc = (1.0 + eps) * compliant.trajectory.total_reward() - compliant.adv_reward;
      bool compliant_prefix_clean = false;
      try {
        necessity_adversary(sc, sc.config);
      } catch (const NothingToFalsify&) {
        compliant_prefix_clean = true;
      }
      const bool ok = gb < 0.0 && gc >= -1e-9 && compliant_prefix_clean;
      out.pass &= ok;
      part = fmt("%s: variant %.4f vs advice %.4f, compliant %.4f vs %.4f",
                 std::string(to_string(sc.constraint)).c_str(),
                 (1.0 + eps) * broken.trajectory.total_reward(), broken.adv_reward,
                 (1.0 + eps) * compliant.trajectory.total_reward(), compliant.adv_reward);
    } catch (const std::exception& e) {
      out.pass = false;
      part = fmt("%s: %s", std::string(to_string(sc.constraint)).c_str(), e.what());
    }
    out.detail += (out.detail.empty() ? "" : "; ") + part;
  }
  return out;
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(77);
  int mismatches = 0, duality_violations = 0;
  double worst_slack = 1e300;
  for (int i = 0; i < 500; ++i) {
    MenuFamily fam;
    fam.horizon = static_cast<int>(uniform_int(rng, 1, 12));
    fam.menu_size = static_cast<int>(uniform_int(rng, 1, 3));  // plus do-nothing
    fam.l = 0.2 + 0.8 * uniform01(rng);
    fam.u = fam.l + (3.0 - fam.l) * uniform01(rng);
    fam.high_quanta = static_cast<int>(uniform_int(rng, 2, 6));
    fam.rho = fam.quantum * (1.0 + (fam.high_quanta - 1) * uniform01(rng));
    const Instance inst = gen_finite_menu_random(fam, 9000 + static_cast<std::uint64_t>(i));
    const double dp = solve_opt(inst).value;
    if (dp != enumerate_opt(inst)) ++mismatches;
    for (int k = 0; k < 2; ++k) {
      const double lambda = inst.params.lambda_max * uniform01(rng);
      const double slack = dual_value(lambda, inst) - dp;
      worst_slack = std::min(worst_slack, slack);
      if (slack < -1e-9) ++duality_violations;
    }
  }
  Outcome out;
  out.pass = mismatches == 0 && duality_violations == 0;
  out.detail = fmt("500 instances, %d DP/enumeration mismatches; 1000 dual evaluations, "
                   "%d below OPT, min slack %.3e",
                   mismatches, duality_violations, worst_slack);
  return out;
}

Outcome competitive_ratio() {
  const double rho = 0.5, b_low = 0.25, b_bar = 1.0, l = 0.2, u = 2.0;
  const double alpha = (b_bar - b_low) / (rho - b_low);
  Outcome out;
  out.pass = true;
  for (double fraction : {0.0, 0.25, 0.5}) {
    double ratio[2] = {0.0, 0.0};
    int k = 0;
    for (int T : {1000, 10000}) {
      const InstanceParams p = switch_params(T, rho, b_low, b_bar, l, u);
      const AdaptiveEpisode ep =
          run_switch_episode({"robust", RobustConfig{}}, p, b_low, fraction);
      audits.add(ep.result.trajectory, p);
      const double opt = solve_opt(ep.instance).value;
      const double reward = ep.result.trajectory.total_reward();
      ratio[k++] = reward > 0.0 ? opt / reward : INFINITY;
    }
    const bool ok = std::isfinite(ratio[0]) && std::isfinite(ratio[1]) &&
                    ratio[1] <= ratio[0] * (1.0 + 1e-9) && ratio[1] <= 1.5 * alpha;
    out.pass &= ok;
    out.detail += fmt("%sswitch at %s: %.5f -> %.5f", out.detail.empty() ? "" : "; ",
                      fraction == 0.0 ? "depletion" : fmt("%.2f B", fraction).c_str(),
                      ratio[0], ratio[1]);
  }
  out.detail += fmt("; cap 1.5 alpha = %.2f", 1.5 * alpha);
  return out;
}

Outcome budget_and_determinism() {
  int mismatches = 0;
  // trajectories of every policy family, run twice
  {
    const Figure1Run a = run_figure1(3), b = run_figure1(3);
    const auto csv = [](const Figure1Run& r) {
      return trajectories_csv({{3, &r.robust.trajectory}, {3, &r.omd.trajectory},
                               {3, &r.roa.trajectory}});
    };
    if (csv(a) != csv(b)) ++mismatches;
    const Figure1Panels pa = figure1_panels(a), pb = figure1_panels(b);
    if (pa.reward != pb.reward || pa.degradation != pb.degradation || pa.lambda != pb.lambda)
      ++mismatches;
  }
  {
    ExperimentConfig c;
    c.family.kind = "menu";
    c.family.menu.rho = 0.5;
    c.horizons = {60, 120};
    c.seeds = {0, 1, 2, 3, 4, 5};
    c.policies = Json::array(
        {Json{{"kind", "robust"}}, Json{{"kind", "omd"}}, Json{{"kind", "roa"}},
         Json{{"kind", "greedy"}},
         Json{{"kind", "la"}, {"epsilon", 0.1}, {"advice", Json{{"policy", "robust"}}}}});
    const auto x = run_sweep(c, {true, true});
    const auto y = run_sweep(c, {false, true});
    if (sweep_to_json(x, aggregate(x)).dump() != sweep_to_json(y, aggregate(y)).dump())
      ++mismatches;
    std::vector<LabeledTrajectory> rx, ry;
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j < x[i].episodes.size(); ++j) {
        rx.push_back({x[i].seed, &x[i].episodes[j].episode.trajectory});
        ry.push_back({y[i].seed, &y[i].episodes[j].episode.trajectory});
        audits.add(x[i].episodes[j].episode.trajectory,
                   make_instance(c.family, x[i].horizon, x[i].seed).params);
      }
    if (trajectories_csv(rx) != trajectories_csv(ry)) ++mismatches;
  }
  {
    const NecessityScenario sc = lead_scenario();
    const NecessityInstance a = necessity_adversary(sc, sc.variant());
    const NecessityInstance b = necessity_adversary(sc, sc.variant());
    if (instance_to_json(a.instance).dump() != instance_to_json(b.instance).dump()) ++mismatches;
  }
  Outcome out;
  out.pass = audits.failed == 0 && audits.checked > 0 && mismatches == 0;
  out.detail = fmt("%ld trajectories audited, %ld over budget or inconsistent%s%s; "
                   "%d determinism mismatches",
                   audits.checked, audits.failed, audits.failed ? ": " : "",
                   audits.first_failure.c_str(), mismatches);
  return out;
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  auto guarded = [](const std::function<Outcome()>& f) {
    try {
      return f();
    } catch (const std::exception& e) {
      return Outcome{false, std::string("error: ") + e.what()};
    }
  };
  report(1, "linear benchmark reward ordering and ratio-of-averages depletion", guarded(linear_benchmark));
  report(2, "regret scaling over T", guarded(regret_scaling));
  report(3, "rolling-average path length", guarded(path_length_bound));
  report(4, "dynamic dual regret bound", guarded(dynamic_regret_bound));
  ConsistencySuite suite;
  try {
    suite = consistency_suite();
  } catch (const std::exception& e) {
    std::printf("consistency suite aborted: %s\n", e.what());
  }
  report(5, "(1+eps)-consistency with the advice", consistency(suite));
  report(6, "following the advice always passes the constraints", recursive_feasibility(suite));
  report(7, "each consistency constraint is necessary", guarded(necessity));
  report(8, "exact oracle agrees with enumeration; weak duality", guarded(oracle_equivalence));
  report(9, "competitive ratio on the switching adversary", guarded(competitive_ratio));
  report(10, "budget audit and byte-identical reruns", guarded(budget_and_determinism));
  std::printf("%d of 10 criteria failed; %.1fs total\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
