#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tqst/io.hpp"
#include "tqst/metrics.hpp"
#include "tqst/pipeline.hpp"

using namespace tqst;
namespace fs = std::filesystem;

namespace {

PipelineConfig state_config(StateKind kind, int n, double t) {
  PipelineConfig c;
  c.state = StateSpec{kind, n, 0.5};
  c.threshold = ThresholdSpec{false, t, std::nullopt, 0};
  c.sampling = Sampling::Exact;
  return c;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(TQST_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("state and threshold parsing") {
  CHECK(parse_state_kind("w") == StateKind::W);
  CHECK(parse_state_kind("colorcode1") == StateKind::ColorCode1);
  CHECK(to_string(StateKind::Ghz) == "ghz");
  CHECK_THROWS_AS(parse_state_kind("bell"), std::invalid_argument);
  CHECK(parse_threshold("auto").automatic);
  CHECK(parse_threshold("0.25").value == 0.25);
  CHECK_THROWS_AS(parse_threshold("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_threshold("x"), std::invalid_argument);
}

TEST_CASE("config validation") {
  PipelineConfig c;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = state_config(StateKind::W, 3, 0.1);
  CHECK_NOTHROW(c.validate());
  c.diag_file = "d.csv";
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = state_config(StateKind::W, 3, 0.1);
  c.shots = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("W4 pipeline") {
  const PipelineResult r = run_pipeline(state_config(StateKind::W, 4, 0.1));
  CHECK(r.plan->size() == 28);
  CHECK(r.records.size() == 28);
  CHECK(r.offdiagonal_records().size() == 12);
  CHECK(r.report->fidelity >= 0.99);
  CHECK(r.fidelity_bound.has_value());
}

TEST_CASE("color-code pipeline") {
  const PipelineResult r = run_pipeline(state_config(StateKind::ColorCode0, 7, 0.01));
  CHECK(r.records.size() == 184);
  CHECK(r.settings.size() == 57);
  CHECK(r.report->fidelity >= 0.99);
}

TEST_CASE("automatic threshold pipeline") {
  PipelineConfig c = state_config(StateKind::W, 3, 0.0);
  c.threshold = ThresholdSpec{true, 0.0, std::nullopt, 20};
  c.sampling = Sampling::Multinomial;
  c.depolarizing = 0.02;
  c.shots = 10000;
  c.seed = 5;
  const PipelineResult r = run_pipeline(c);
  REQUIRE(r.threshold_estimate.has_value());
  CHECK(r.threshold_estimate->favorable);
  CHECK(r.plan->size() == 8 + 6);
}

TEST_CASE("simulate then reconstruct equals run") {
  const fs::path dir = fs::temp_directory_path() / "tqst_cli_test";
  fs::remove_all(dir);
  const std::string common = "--state w --n 3 --lambda 0.05 --shots 4000 --seed 99";
  REQUIRE(cli("run " + common + " --threshold 0.1 --out " + (dir / "run").string()) == 0);
  REQUIRE(cli("simulate " + common + " --threshold 0.1 --out " + (dir / "sim").string()) == 0);
  REQUIRE(cli("reconstruct --seed 99 --diag " + (dir / "sim" / "diag.csv").string() + " --counts " +
              (dir / "sim" / "counts.csv").string() + " --out " + (dir / "rec").string()) == 0);
  CHECK(slurp(dir / "run" / "rho.json") == slurp(dir / "rec" / "rho.json"));
  CHECK(slurp(dir / "run" / "counts.csv") == slurp(dir / "sim" / "counts.csv"));
  CHECK(slurp(dir / "run" / "plan.csv") == slurp(dir / "sim" / "plan.csv"));

  // Every emitted file parses back through its own reader.
  CHECK_NOTHROW(io::read_plan(dir / "run" / "plan.csv"));
  CHECK_NOTHROW(io::read_diagonal(dir / "run" / "diag.csv"));
  CHECK_NOTHROW(io::read_counts(dir / "run" / "counts.csv"));
  CHECK_NOTHROW(io::read_density(dir / "run" / "rho.json"));
  std::ifstream settings(dir / "run" / "settings.csv");
  CHECK_FALSE(io::read_settings(settings).empty());
  CHECK(nlohmann::json::accept(slurp(dir / "run" / "diagnostics.json")));
  CHECK(nlohmann::json::accept(slurp(dir / "run" / "fidelity.json")));

  CHECK(cli("fidelity " + (dir / "run" / "rho.json").string() + " " + (dir / "rec" / "rho.json").string()) == 0);
  CHECK(cli("settings --plan " + (dir / "run" / "plan.csv").string()) == 0);
  CHECK(cli("bound --diag " + (dir / "run" / "diag.csv").string() + " --threshold 0.1") == 0);
  CHECK(cli("plan --diag " + (dir / "run" / "diag.csv").string() + " --threshold 0.1") == 0);
  CHECK(cli("completeness --n 2") == 0);
  fs::remove_all(dir);
}

TEST_CASE("CLI exit codes") {
  CHECK(cli("run --state w --n 3 --threshold 2") == 2);
  CHECK(cli("run --state nope --n 3 --threshold 0.1") == 2);
  CHECK(cli("fidelity /nonexistent/a.json /nonexistent/b.json") == 2);
  CHECK(cli("completeness --n 9") == 2);
  CHECK(cli("") == 2);
  CHECK(cli("run --state w --n 3 --threshold 0.1 --max-iter 1 --out " +
            (fs::temp_directory_path() / "tqst_cli_maxiter").string()) == 3);
  fs::remove_all(fs::temp_directory_path() / "tqst_cli_maxiter");
}
