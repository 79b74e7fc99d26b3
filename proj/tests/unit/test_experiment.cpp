// Copyright 2026 The dpssp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "dpssp/experiment.hpp"

using namespace dpssp;
namespace fs = std::filesystem;

namespace {

const char* kSmallGame = R"({
  "problem": {"kind": "matching_pennies", "scale": 0.5, "noise": 0.1},
  "algorithm": "smd_vertex", "epsilon": 1.0, "delta": 1e-5,
  "n_grid": [400, 900], "trials": 3, "master_seed": 3
})";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("dpssp_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

bool same_rows(const std::vector<RunRecord>& a, const std::vector<RunRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (format_csv_row(a[i]) != format_csv_row(b[i])) return false;
  return true;
}

}  // namespace

TEST_CASE("config parsing rejects malformed input") {
  CHECK_NOTHROW(parse_config(kSmallGame, "."));
  CHECK_THROWS_AS(parse_config("{not json", "."), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": {"kind": "matching_pennies"}, "epsilon": 1,
                                   "delta": 1e-5, "n_grid": [10], "colour": 1})", "."),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": {"kind": "matching_pennies"}, "delta": 1e-5,
                                   "n_grid": [10]})", "."),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": {"kind": "teapot"}, "epsilon": 1,
                                   "delta": 1e-5, "n_grid": [10]})", "."),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": {"kind": "matching_pennies"}, "epsilon": 1,
                                   "delta": 1e-5, "n_grid": [10], "algorithm": "dp_sco"})", "."),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": {"kind": "quadratic_sco", "d": 4}, "epsilon": 1,
                                   "delta": 1e-5, "n_grid": [10]})", "."),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": {"kind": "quadratic_sco", "d": 4}, "epsilon": 1,
                                   "algorithm": "dp_sco", "mode": "quadratic",
                                   "delta": 1e-5, "n_grid": [10]})", "."),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": {"kind": "matching_pennies"}, "epsilon": 1,
                                   "delta": 1e-5, "n_grid": [10], "overrides": {"Z": 1}})", "."),
                  ConfigError);
  // Privacy parameters outside the supported range.
  CHECK_THROWS_AS(parse_config(R"({"problem": {"kind": "matching_pennies"}, "epsilon": 100,
                                   "delta": 1e-5, "n_grid": [10]})", "."),
                  BudgetError);
  CHECK_THROWS_AS(parse_config(R"({"problem": {"kind": "matching_pennies"}, "epsilon": 1,
                                   "delta": 0, "n_grid": [10]})", "."),
                  BudgetError);
  CHECK(algorithm_from_string(to_string(Algorithm::kBoosted)) == Algorithm::kBoosted);
  CHECK_THROWS_AS(algorithm_from_string("sgd"), ConfigError);
}

TEST_CASE("runs are deterministic and independent of the thread count") {
  const ExperimentConfig c = parse_config(kSmallGame, ".");
  const auto a = run_experiment(c, {1, false});
  const auto b = run_experiment(c, {1, false});
  const auto p = run_experiment(c, {3, false});
  REQUIRE(a.size() == 6);
  CHECK(same_rows(a, b));
  CHECK(same_rows(a, p));
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].n == (i < 3 ? 400u : 900u));
    CHECK(a[i].trial == i % 3);
    CHECK(a[i].metric == "gap");
    CHECK(a[i].metric_value >= 0.0);
    CHECK(a[i].wall_time_ms == 0.0);
    CHECK(a[i].samples_used <= a[i].n);
  }
  // Different trials see different streams.
  CHECK(a[0].seed != a[1].seed);
  ExperimentConfig other = c;
  other.master_seed = 4;
  CHECK_FALSE(same_rows(a, run_experiment(other)));
}

TEST_CASE("each algorithm runs from a config") {
  const char* configs[] = {
      R"({"problem": {"kind": "matrix_game", "random": {"d_x": 4, "d_y": 3}, "noise": 0.1},
          "algorithm": "smd_bias_reduced", "epsilon": 1, "delta": 1e-5,
          "n_grid": [3000], "master_seed": 1})",
      R"({"problem": {"kind": "matching_pennies", "scale": 0.5},
          "algorithm": "boosted", "epsilon": 1, "delta": 1e-5,
          "n_grid": [20000], "master_seed": 1, "boost": {"I": 2, "J": 2}})",
      R"({"problem": {"kind": "quadratic_sco", "d": 5},
          "algorithm": "dp_sco", "epsilon": 1, "delta": 1e-5,
          "n_grid": [2000], "master_seed": 1})",
      R"({"problem": {"kind": "max_loss", "d_x": 4, "components": 3},
          "algorithm": "nonprivate_smd", "epsilon": 1, "delta": 1e-5,
          "n_grid": [500], "master_seed": 1})",
      R"({"problem": {"kind": "synth_data", "domain_size": 4, "random_queries": 3,
                      "distribution": [0.1, 0.2, 0.3, 0.4]},
          "algorithm": "smd_vertex", "mode": "first_order", "epsilon": 1, "delta": 1e-5,
          "n_grid": [2000], "master_seed": 1})",
  };
  for (const char* text : configs) {
    INFO(text);
    const auto rows = run_experiment(parse_config(text, "."));
    REQUIRE(rows.size() == 1);
    CHECK(std::isfinite(rows[0].metric_value));
    CHECK(rows[0].plan_json.front() == '{');
  }
  const auto sco = run_experiment(parse_config(configs[2], "."));
  CHECK(sco[0].metric == "excess_risk");
  CHECK(sco[0].metric_value >= -1e-12);
}

TEST_CASE("infeasible plans and overrides fail before any solver work") {
  // Too few samples for the theoretical plan.
  CHECK_THROWS_AS(run_experiment(parse_config(R"({"problem": {"kind": "matching_pennies"},
      "algorithm": "smd_bias_reduced", "epsilon": 0.01, "delta": 1e-5, "n_grid": [20]})", ".")),
                  BudgetError);
  // Step size above the privacy bound.
  CHECK_THROWS_AS(run_experiment(parse_config(R"({"problem": {"kind": "matching_pennies"},
      "epsilon": 1, "delta": 1e-5, "n_grid": [1000], "overrides": {"tau": 50.0}})", ".")),
                  BudgetError);
  // Explicit overrides that are feasible are honoured verbatim.
  const auto rows = run_experiment(parse_config(R"({"problem": {"kind": "matching_pennies"},
      "epsilon": 1, "delta": 1e-5, "n_grid": [1000], "overrides": {"T": 5, "K": 2}})", "."));
  CHECK(rows[0].plan_json.find("\"T\":5") != std::string::npos);
  CHECK(rows[0].steps_run == 5);
}

TEST_CASE("CSV output") {
  RunRecord r;
  r.trial = 2;
  r.n = 100;
  r.algorithm = "smd_vertex";
  r.mode = "first_order";
  r.metric = "gap";
  r.metric_value = 0.1;
  r.plan_json = R"({"T":3,"mode":"first_order"})";
  const std::string row = format_csv_row(r);
  CHECK(row.find(R"("{""T"":3,""mode"":""first_order""}")") != std::string::npos);
  CHECK(row.rfind("2,100,smd_vertex,first_order,gap,0.10000000000000001,", 0) == 0);

  const fs::path dir = fresh_dir("csv");
  const fs::path csv = dir / "out.csv";
  append_csv(csv, {r});
  append_csv(csv, {r, r});
  const std::string text = slurp(csv);
  std::size_t headers = 0, lines = 0;
  for (std::size_t pos = 0; (pos = text.find(kCsvHeader, pos)) != std::string::npos; ++pos)
    ++headers;
  for (char ch : text) lines += ch == '\n';
  CHECK(headers == 1);
  CHECK(lines == 4);
  CHECK_THROWS(append_csv(dir / "missing" / "x.csv", {r}));

  ExperimentConfig cfg = parse_config(kSmallGame, ".");
  append_metadata(csv, kSmallGame, cfg, 1);
  append_metadata(csv, kSmallGame, cfg, 2);
  const std::string meta = slurp(metadata_path(csv));
  CHECK(metadata_path(csv).string() == csv.string() + ".meta.json");
  CHECK(meta.find("\"code_version\"") != std::string::npos);
  char hash[32];
  std::snprintf(hash, sizeof hash, "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(kSmallGame)));
  std::size_t count = 0;
  for (std::size_t pos = 0; (pos = meta.find(hash, pos)) != std::string::npos; ++pos) ++count;
  CHECK(count == 2);
  // Known FNV-1a vectors.
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("verify report") {
  std::vector<SuiteReport> reps = {verify_maurey_suite(MaureySuite::kValueBias, 10, 1)};
  const std::string a = verify_report_json(reps, 1);
  CHECK(a == verify_report_json({verify_maurey_suite(MaureySuite::kValueBias, 10, 1)}, 1));
  CHECK(a.find("warning") != std::string::npos);
  CHECK(a.find("\"insufficient_reps\": true") != std::string::npos);
}

TEST_CASE("synthetic data run") {
  const char* text = R"({"problem": {"kind": "synth_data", "domain_size": 3,
      "queries": [[1, 0, 0], [0, 1, 1], [1, 1, 1]], "data": [0, 0, 1, 2, 2, 2, 1, 0, 0, 2]},
      "epsilon": 1, "delta": 1e-5, "master_seed": 9})";
  const ExperimentConfig c = parse_config(text, ".");
  const SynthRun a = run_synth(c), b = run_synth(c);
  CHECK(a.categories == b.categories);
  CHECK(a.report_json == b.report_json);
  for (std::size_t z : a.categories) CHECK(z < 3);
  CHECK(a.report_json.find("\"reference\": \"empirical\"") != std::string::npos);
  CHECK_THROWS_AS(run_synth(parse_config(kSmallGame, ".")), ConfigError);
  CHECK_THROWS_AS(run_synth(parse_config(R"({"problem": {"kind": "synth_data", "domain_size": 3,
      "queries": [[1, 0, 0]], "data_file": "no_such.csv"}, "epsilon": 1, "delta": 1e-5})", ".")),
                  DatasetError);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ErrorKind::kConfig) == 2);
  CHECK(exit_code_for(ErrorKind::kInvalidParameter) == 2);
  CHECK(exit_code_for(ErrorKind::kShape) == 2);
  CHECK(exit_code_for(ErrorKind::kBudget) == 3);
  CHECK(exit_code_for(ErrorKind::kDataset) == 4);
  CHECK(exit_code_for(ErrorKind::kOracle) == 5);
  CHECK(exit_code_for(ErrorKind::kNumeric) == 1);
}
