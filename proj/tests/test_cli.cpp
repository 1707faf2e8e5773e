#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ora/experiment.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kOut = fs::temp_directory_path() / "ora_cli_test";

int run(const std::string& args) {
  const std::string cmd = "ORA_OUT='" + kOut.string() + "' '" ORA_CLI_PATH "' " + args +
                          " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int count_lines(const fs::path& p) {
  const std::string s = slurp(p);
  return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

std::string data(const char* name) { return std::string(ORA_TEST_DATA "/") + name; }

void check_run_files(const fs::path& dir) {
  for (const char* f : {"instances.json", "trajectories.csv", "metrics.json", "summary.md"})
    CHECK(fs::exists(dir / f));
}

}  // namespace

TEST_CASE("figure1 writes three 2000-round panels, byte-identical across runs") {
  fs::remove_all(kOut);
  REQUIRE(run("figure1 --seed 7") == 0);
  const fs::path dir = kOut / "figure1-seed7";
  check_run_files(dir);
  for (const char* panel : {"figure1_reward.csv", "figure1_degradation.csv", "figure1_lambda.csv"}) {
    CHECK(count_lines(dir / panel) == 2001);
    CHECK(slurp(dir / panel).rfind("t,robust,omd,roa\r\n", 0) == 0);
  }
  const std::string first = slurp(dir / "trajectories.csv") + slurp(dir / "metrics.json");
  REQUIRE(run("figure1 --seed 7 --run-id again") == 0);
  CHECK(first == slurp(kOut / "again" / "trajectories.csv") + slurp(kOut / "again" / "metrics.json"));
}

TEST_CASE("sweep emits a regret table with decreasing regret per round") {
  REQUIRE(run("sweep --T 250,500,1000,2000,4000 --seeds 30 --policy robust") == 0);
  const fs::path dir = kOut / "sweep-robust-T250_500_1000_2000_4000-s30";
  check_run_files(dir);
  const ora::Json m = ora::read_json_file(dir / "metrics.json");
  const ora::Json& rows = m.at("aggregate");
  REQUIRE(rows.size() == 5);
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(rows[i].at("regret_per_T").get<double>() < rows[i - 1].at("regret_per_T").get<double>());

  REQUIRE(run("sweep --T 100,200 --seeds 3 --policy robust,omd --serial --run-id s1") == 0);
  REQUIRE(run("sweep --T 100,200 --seeds 3 --policy robust,omd --run-id s2") == 0);
  CHECK(slurp(kOut / "s1" / "metrics.json") == slurp(kOut / "s2" / "metrics.json"));
}

TEST_CASE("simulate runs every configured policy") {
  REQUIRE(run("simulate --config " + data("simulate_linear.json")) == 0);
  const fs::path dir = kOut / "simulate-simulate_linear";
  check_run_files(dir);
  // 2 seeds x 5 policies x 500 rounds plus the header
  CHECK(count_lines(dir / "trajectories.csv") == 5001);
  const std::string a = slurp(dir / "trajectories.csv");
  REQUIRE(run("simulate --config " + data("simulate_linear.json")) == 0);
  CHECK(a == slurp(dir / "trajectories.csv"));

  REQUIRE(run("simulate --config " + data("simulate_menu_la.json") + " --epsilon 0.3") == 0);
  const ora::Json m = ora::read_json_file(kOut / "simulate-simulate_menu_la" / "metrics.json");
  for (const ora::Json& e : m.at("episodes"))
    if (e.contains("consistency_margin") && !e.at("consistency_margin").is_null())
      CHECK(e.at("consistency_margin").get<double>() >= -1e-9);

  REQUIRE(run("simulate --config " + data("simulate_linear.json") +
              " --seed 5 --T 300 --policy greedy --run-id override") == 0);
  CHECK(count_lines(kOut / "override" / "trajectories.csv") == 301);
}

TEST_CASE("oracle reproduces the stored optimum") {
  REQUIRE(run("oracle --instance " + data("menu_instance.json") + " --snapshot " +
              data("menu_instance_opt.json")) == 0);
  check_run_files(kOut / "oracle-menu_instance");
  const ora::Json snap = ora::read_json_file(data("menu_instance_opt.json"));
  const ora::Instance inst = ora::load_instance(data("menu_instance.json"));
  CHECK(snap.at("value").get<double>() == testutil::brute_force_opt(inst));
}

TEST_CASE("errors map to exit codes") {
  CHECK(run("simulate --config " + data("bad_config.json")) == 2);
  CHECK(run("simulate") == 2);
  CHECK(run("nonsense") == 2);
  CHECK(run("oracle --instance " + data("simulate_linear.json")) == 2);
  CHECK(run("--help") == 0);
}
