#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"
#include "pvmpc/plant.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string output;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(PVMPC_BIN) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 512> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) r.output += buf.data();
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("pvmpc_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("size prints the reference design") {
  const auto r = run("size");
  CHECK(r.code == 0);
  CHECK(r.output.find("panels_parallel   3") != std::string::npos);
  CHECK(r.output.find("battery_series    2") != std::string::npos);
  CHECK(r.output.find("system_voltage_v  24") != std::string::npos);
  const auto zero = run("size --insolation 0");
  CHECK(zero.code != 0);
  CHECK(zero.output.find("zero sun") != std::string::npos);
}

TEST_CASE("baseline simulation writes its artifacts") {
  const auto dir = scratch("baseline");
  const auto weather = dir / "w.csv";
  REQUIRE(run("synth-weather --days 1 --profile cloudy --file " + weather.string()).code == 0);
  REQUIRE(fs::exists(weather));
  const auto r = run("--out " + dir.string() + " simulate --controller baseline --days 1 --quiet --weather " +
                     weather.string());
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "trace_baseline.csv"));
  CHECK(fs::exists(dir / "metrics_baseline.json"));
  CHECK_FALSE(fs::exists(dir / "solver_log.csv"));
  const auto trace = pvmpc::read_trace_csv(dir / "trace_baseline.csv", 1.0 / 6.0);
  CHECK(trace.steps.size() == 144);
  const auto recomputed = pvmpc::compute_metrics(trace, 0.0, 4.0, 0.05);
  const auto stored = pvmpc::metrics_from_json(slurp(dir / "metrics_baseline.json"));
  CHECK(stored.temp_violation_hours_per_day == doctest::Approx(recomputed.temp_violation_hours_per_day));
  CHECK(stored.secondary_unserved_pct == doctest::Approx(recomputed.secondary_unserved_pct));
  fs::remove_all(dir);
}

TEST_CASE("proposed simulation logs its solves") {
  const auto dir = scratch("proposed");
  const auto r = run("--out " + dir.string() +
                     " simulate --controller proposed --profile clear --days 1 --horizon 6 --quiet");
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "solver_log.csv"));
  const auto summary = slurp(dir / "metrics_proposed.json");
  CHECK(summary.find("\"stalls\"") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("errors name the missing input") {
  const auto r = run("simulate --controller baseline --weather /nonexistent/weather.csv");
  CHECK(r.code != 0);
  CHECK(r.output.find("/nonexistent/weather.csv") != std::string::npos);
  const auto bad = run("simulate --controller pid --days 1");
  CHECK(bad.code != 0);
  const auto cfg = run("--config /nonexistent/cfg.json simulate --days 1");
  CHECK(cfg.code != 0);
  CHECK(cfg.output.find("/nonexistent/cfg.json") != std::string::npos);
}
