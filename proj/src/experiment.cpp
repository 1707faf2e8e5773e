#include "ora/experiment.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <sstream>

namespace ora {

Instance make_instance(const FamilySpec& f, int horizon, std::uint64_t seed) {
  if (f.kind == "linear") return gen_stochastic_linear(horizon, f.rho, f.delta, seed);
  if (f.kind == "menu") {
    MenuFamily m = f.menu;
    m.horizon = horizon;
    return gen_finite_menu_random(m, seed);
  }
  if (f.kind == "file") return load_instance(f.path);
  throw ConfigError("unknown instance family: " + f.kind);
}

Json family_to_json(const FamilySpec& f) {
  Json j;
  j["kind"] = f.kind;
  if (f.kind == "linear") {
    j["rho"] = f.rho;
    j["delta"] = f.delta;
  } else if (f.kind == "menu") {
    j["rho"] = f.menu.rho;
    j["menu_size"] = f.menu.menu_size;
    j["l"] = f.menu.l;
    j["u"] = f.menu.u;
    j["quantum"] = f.menu.quantum;
    j["low_quanta"] = f.menu.low_quanta;
    j["high_quanta"] = f.menu.high_quanta;
    j["full_grid"] = f.menu.full_grid;
  } else {
    j["path"] = f.path;
  }
  return j;
}

namespace {

double num(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number())
    throw ConfigError(std::string("expected a number for ") + key);
  return j.at(key).get<double>();
}

int integer(const Json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer())
    throw ConfigError(std::string("expected an integer for ") + key);
  return j.at(key).get<int>();
}

std::string str(const Json& j, const char* key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string())
    throw ConfigError(std::string("expected a string for ") + key);
  return j.at(key).get<std::string>();
}

std::optional<double> stepsize_spec(const Json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  const Json& v = j.at(key);
  if (v.is_string() && v.get<std::string>() == "auto") return std::nullopt;
  if (!v.is_number() || !(v.get<double>() > 0.0))
    throw ConfigError(std::string(key) + " must be a positive number or \"auto\"");
  return v.get<double>();
}

}  // namespace

FamilySpec family_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("family must be an object");
  FamilySpec f;
  f.kind = str(j, "kind", "linear");
  if (f.kind == "linear") {
    f.rho = num(j, "rho", f.rho);
    f.delta = num(j, "delta", f.delta);
  } else if (f.kind == "menu") {
    f.menu.rho = num(j, "rho", f.menu.rho);
    f.menu.menu_size = integer(j, "menu_size", f.menu.menu_size);
    f.menu.l = num(j, "l", f.menu.l);
    f.menu.u = num(j, "u", f.menu.u);
    f.menu.quantum = num(j, "quantum", f.menu.quantum);
    f.menu.low_quanta = integer(j, "low_quanta", f.menu.low_quanta);
    f.menu.high_quanta = integer(j, "high_quanta", f.menu.high_quanta);
    if (j.contains("full_grid")) f.menu.full_grid = j.at("full_grid").get<bool>();
  } else if (f.kind == "file") {
    f.path = str(j, "path", "");
    if (f.path.empty()) throw ConfigError("file family needs a path");
  } else {
    throw ConfigError("unknown instance family: " + f.kind);
  }
  return f;
}

MultiplierSource build_multiplier_source(const Json& spec,
                                         const InstanceParams& params) {
  if (spec.is_array()) {
    MultiplierSequence seq;
    for (const Json& v : spec) {
      if (!v.is_number()) throw ConfigError("advice entries must be numbers");
      seq.lambdas.push_back(v.get<double>());
    }
    if (static_cast<int>(seq.lambdas.size()) != params.horizon)
      throw ConfigError("advice has " + std::to_string(seq.lambdas.size()) +
                        " entries, expected T = " +
                        std::to_string(params.horizon));
    for (double l : seq.lambdas)
      if (!(l >= 0.0)) throw ConfigError("advice multipliers must be >= 0");
    return seq;
  }
  if (!spec.is_object()) throw ConfigError("advice must be an array or object");
  const std::string kind = str(spec, "policy", "robust");
  if (kind == "constant") {
    const double l = num(spec, "lambda", 0.0);
    if (!(l >= 0.0)) throw ConfigError("advice multipliers must be >= 0");
    return constant_multiplier(l, params.horizon);
  }
  if (kind == "robust")
    return RobustSource{num(spec, "lambda_1", 0.0), stepsize_spec(spec, "eta")};
  throw ConfigError("unknown advice policy: " + kind);
}

PolicyConfig build_policy(const Json& spec, const InstanceParams& params) {
  if (!spec.is_object()) throw ConfigError("policy must be an object");
  const std::string kind = str(spec, "kind", "");
  PolicyConfig pc;
  pc.name = str(spec, "name", kind);
  if (kind == "robust") {
    pc.spec = RobustConfig{num(spec, "lambda_1", 0.0), stepsize_spec(spec, "eta")};
  } else if (kind == "omd") {
    pc.spec = OmdConfig{num(spec, "lambda_1", 0.0), stepsize_spec(spec, "eta")};
  } else if (kind == "roa") {
    int window = 0;
    if (spec.contains("window") && !(spec.at("window").is_string() &&
                                     spec.at("window").get<std::string>() == "all"))
      window = integer(spec, "window", 0);
    pc.spec = RoaConfig{num(spec, "lambda_1", 0.0), window};
  } else if (kind == "static") {
    pc.spec = StaticConfig{num(spec, "lambda", 0.0)};
  } else if (kind == "greedy") {
    pc.spec = GreedyConfig{};
  } else if (kind == "la") {
    LaConfig la;
    la.epsilon = num(spec, "epsilon", params.epsilon);
    if (!(la.epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
    la.advice = spec.contains("advice")
                    ? build_multiplier_source(spec.at("advice"), params)
                    : MultiplierSource{RobustSource{}};
    la.rob = spec.contains("rob") ? build_multiplier_source(spec.at("rob"), params)
                                  : MultiplierSource{RobustSource{}};
    const std::string ignore = str(spec, "ignore", "");
    if (ignore == "remaining_tight") la.mask.remaining_tight = false;
    else if (ignore == "remaining_rich") la.mask.remaining_rich = false;
    else if (ignore == "lead") la.mask.lead = false;
    else if (!ignore.empty()) throw ConfigError("unknown constraint: " + ignore);
    pc.spec = la;
  } else {
    throw ConfigError("unknown policy kind: \"" + kind + "\"");
  }
  return pc;
}

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  if (j.contains("family")) c.family = family_from_json(j.at("family"));
  if (j.contains("policies")) {
    if (!j.at("policies").is_array()) throw ConfigError("policies must be an array");
    c.policies = j.at("policies");
  }
  auto horizons = j.contains("T") ? j.at("T") : Json::array({2000});
  if (horizons.is_number_integer()) horizons = Json::array({horizons});
  for (const Json& t : horizons) {
    if (!t.is_number_integer() || t.get<int>() < 2)
      throw ConfigError("T entries must be integers >= 2");
    c.horizons.push_back(t.get<int>());
  }
  const Json seeds = j.contains("seeds") ? j.at("seeds") : Json(1);
  if (seeds.is_number_integer()) {
    const int n = seeds.get<int>();
    if (n < 1) throw ConfigError("seeds must be >= 1");
    for (int s = 0; s < n; ++s) c.seeds.push_back(static_cast<std::uint64_t>(s));
  } else if (seeds.is_array()) {
    for (const Json& s : seeds) {
      if (!s.is_number_unsigned()) throw ConfigError("seeds must be nonnegative integers");
      c.seeds.push_back(s.get<std::uint64_t>());
    }
  } else {
    throw ConfigError("seeds must be a count or a list");
  }
  return c;
}

Json config_to_json(const ExperimentConfig& c) {
  Json j;
  j["family"] = family_to_json(c.family);
  j["policies"] = c.policies;
  j["T"] = c.horizons;
  j["seeds"] = c.seeds;
  return j;
}

namespace {

double epsilon_of(const PolicyConfig& pc) {
  if (const auto* la = std::get_if<LaConfig>(&pc.spec)) return la->epsilon;
  return 0.0;
}

InstanceOutput run_cell(const ExperimentConfig& config, int horizon,
                        std::uint64_t seed, const SweepOptions& options) {
  InstanceOutput out;
  out.horizon = horizon;
  out.seed = seed;
  const Instance inst = make_instance(config.family, horizon, seed);
  OracleOptions oo;
  oo.parallel = !options.parallel;
  out.solution = solve_opt(inst, oo);
  out.solution.actions.clear();
  for (const Json& spec : config.policies) {
    const PolicyConfig pc = build_policy(spec, inst.params);
    EpisodeOutput ep;
    ep.horizon = horizon;
    ep.seed = seed;
    ep.episode = run_episode(pc, inst);
    ep.audit = audit_budget(ep.episode.trajectory, inst.params);
    ep.metrics = compute_metrics(ep.episode, out.solution, inst.params,
                                 epsilon_of(pc));
    if (!options.keep_trajectories) {
      ep.episode.trajectory.steps.clear();
      ep.episode.trajectory.steps.shrink_to_fit();
      if (ep.episode.la) {
        ep.episode.la->trajectory.steps.clear();
        ep.episode.la->rounds.clear();
      }
    }
    out.episodes.push_back(std::move(ep));
  }
  return out;
}

}  // namespace

std::vector<InstanceOutput> run_sweep(const ExperimentConfig& config,
                                      const SweepOptions& options) {
  std::vector<std::pair<int, std::uint64_t>> cells;
  for (int T : config.horizons)
    for (std::uint64_t s : config.seeds) cells.emplace_back(T, s);
  const long n = static_cast<long>(cells.size());
  std::vector<InstanceOutput> results(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  auto work = [&](long i) {
    try {
      results[i] = run_cell(config, cells[i].first, cells[i].second, options);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (options.parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) work(i);
  } else {
    for (long i = 0; i < n; ++i) work(i);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

std::vector<AggregateRow> aggregate(const std::vector<InstanceOutput>& cells) {
  struct Acc {
    std::vector<double> reward, opt, regret, ratio;
    int failures = 0;
  };
  std::map<std::pair<std::string, int>, Acc> groups;
  std::vector<std::pair<std::string, int>> order;
  for (const InstanceOutput& c : cells) {
    for (const EpisodeOutput& e : c.episodes) {
      const auto key = std::make_pair(e.metrics.policy, c.horizon);
      if (!groups.count(key)) order.push_back(key);
      Acc& a = groups[key];
      a.reward.push_back(e.metrics.total_reward);
      a.opt.push_back(e.metrics.opt);
      a.regret.push_back(e.metrics.regret);
      a.ratio.push_back(e.metrics.ratio);
      if (!e.audit.ok) ++a.failures;
    }
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
  };
  auto stderr_of = [&](const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    const double n = static_cast<double>(v.size());
    return std::sqrt(ss / (n - 1.0) / n);
  };
  std::vector<AggregateRow> rows;
  for (const auto& key : order) {
    const Acc& a = groups[key];
    AggregateRow r;
    r.policy = key.first;
    r.horizon = key.second;
    r.n = static_cast<int>(a.reward.size());
    r.mean_reward = mean(a.reward);
    r.se_reward = stderr_of(a.reward);
    r.mean_opt = mean(a.opt);
    r.mean_regret = mean(a.regret);
    r.se_regret = stderr_of(a.regret);
    const double T = static_cast<double>(r.horizon);
    r.regret_per_t = r.mean_regret / T;
    r.regret_scaled = r.mean_regret / std::sqrt(T * std::log(T));
    r.mean_ratio = mean(a.ratio);
    r.budget_failures = a.failures;
    rows.push_back(r);
  }
  return rows;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string trajectories_csv(const std::vector<LabeledTrajectory>& rows) {
  std::ostringstream out;
  out << "policy,seed,t,lambda,p_bar,mu,reward,consumption,cum_reward,"
         "cum_consumption,remaining,endgame\r\n";
  for (const LabeledTrajectory& lt : rows) {
    const std::string policy = csv_field(lt.trajectory->policy);
    for (const StepRecord& s : lt.trajectory->steps) {
      out << policy << ',' << lt.seed << ',' << s.t << ','
          << format_number(s.lambda) << ',' << format_number(s.p_bar) << ','
          << format_number(s.mu) << ',' << format_number(s.action.reward)
          << ',' << format_number(s.action.consumption) << ','
          << format_number(s.cum_reward) << ','
          << format_number(s.cum_consumption) << ','
          << format_number(s.remaining) << ',' << to_string(s.endgame)
          << "\r\n";
    }
  }
  return out.str();
}

Json sweep_to_json(const std::vector<InstanceOutput>& cells,
                   const std::vector<AggregateRow>& rows) {
  Json j;
  Json eps = Json::array();
  for (const InstanceOutput& c : cells) {
    for (const EpisodeOutput& e : c.episodes) {
      Json m = metrics_to_json(e.metrics);
      m["T"] = c.horizon;
      m["seed"] = c.seed;
      m["lambda_star"] = c.solution.lambda_star;
      m["budget_audit"] = e.audit.ok;
      eps.push_back(std::move(m));
    }
  }
  j["episodes"] = std::move(eps);
  Json agg = Json::array();
  for (const AggregateRow& r : rows) {
    Json a;
    a["policy"] = r.policy;
    a["T"] = r.horizon;
    a["n"] = r.n;
    a["mean_reward"] = r.mean_reward;
    a["se_reward"] = r.se_reward;
    a["mean_opt"] = r.mean_opt;
    a["mean_regret"] = r.mean_regret;
    a["se_regret"] = r.se_regret;
    a["regret_per_T"] = r.regret_per_t;
    a["regret_per_sqrt_T_log_T"] = r.regret_scaled;
    a["mean_ratio"] = r.mean_ratio;
    a["budget_failures"] = r.budget_failures;
    agg.push_back(std::move(a));
  }
  j["aggregate"] = std::move(agg);
  return j;
}

std::string summary_markdown(const std::string& title,
                             const std::vector<AggregateRow>& rows) {
  std::ostringstream out;
  out << "# " << title << "\n\n";
  out << "| policy | T | n | mean reward | se | mean OPT | mean regret | se "
         "| regret/T | regret/sqrt(T ln T) | reward/OPT | audit failures |\n";
  out << "|---|---|---|---|---|---|---|---|---|---|---|---|\n";
  for (const AggregateRow& r : rows) {
    out << "| " << r.policy << " | " << r.horizon << " | " << r.n << " | "
        << format_number(r.mean_reward) << " | " << format_number(r.se_reward)
        << " | " << format_number(r.mean_opt) << " | "
        << format_number(r.mean_regret) << " | " << format_number(r.se_regret)
        << " | " << format_number(r.regret_per_t) << " | "
        << format_number(r.regret_scaled) << " | "
        << format_number(r.mean_ratio) << " | " << r.budget_failures << " |\n";
  }
  return out.str();
}

std::filesystem::path output_root() {
  const char* env = std::getenv("ORA_OUT");
  return env && *env ? std::filesystem::path(env)
                     : std::filesystem::path("outputs");
}

std::filesystem::path write_run(const std::string& run_id,
                                const RunFiles& files) {
  const std::filesystem::path dir = output_root() / run_id;
  std::filesystem::create_directories(dir);
  write_text_file(dir / "instances.json", files.instances.dump(2) + "\n");
  write_text_file(dir / "trajectories.csv", files.trajectories_csv);
  write_text_file(dir / "metrics.json", files.metrics.dump(2) + "\n");
  write_text_file(dir / "summary.md", files.summary);
  return dir;
}

Figure1Run run_figure1(std::uint64_t seed, int horizon) {
  Figure1Run run;
  run.instance = gen_stochastic_linear(horizon, kFigure1Rho, kFigure1Delta, seed);
  run.solution = solve_opt(run.instance);
  const double eta = 1.0 / std::sqrt(static_cast<double>(horizon));
  run.robust = run_episode({"robust", RobustConfig{kFigure1Lambda1, eta}}, run.instance);
  run.omd = run_episode({"omd", OmdConfig{kFigure1Lambda1, eta}}, run.instance);
  run.roa = run_episode({"roa", RoaConfig{kFigure1Lambda1, 0}}, run.instance);
  return run;
}

Figure1Panels figure1_panels(const Figure1Run& run) {
  const auto& a = run.robust.trajectory.steps;
  const auto& b = run.omd.trajectory.steps;
  const auto& c = run.roa.trajectory.steps;
  std::ostringstream reward, degradation, lambda;
  for (auto* out : {&reward, &degradation, &lambda}) *out << "t,robust,omd,roa\r\n";
  for (std::size_t i = 0; i < a.size(); ++i) {
    reward << a[i].t << ',' << format_number(a[i].cum_reward) << ','
           << format_number(b[i].cum_reward) << ','
           << format_number(c[i].cum_reward) << "\r\n";
    degradation << a[i].t << ',' << format_number(a[i].cum_consumption) << ','
                << format_number(b[i].cum_consumption) << ','
                << format_number(c[i].cum_consumption) << "\r\n";
    lambda << a[i].t << ',' << format_number(a[i].lambda) << ','
           << format_number(b[i].lambda) << ',' << format_number(c[i].lambda)
           << "\r\n";
  }
  return {reward.str(), degradation.str(), lambda.str()};
}

}  // namespace ora
