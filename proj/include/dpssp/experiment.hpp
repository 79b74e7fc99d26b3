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

#ifndef DPSSP_EXPERIMENT_HPP_
#define DPSSP_EXPERIMENT_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dpssp/maurey.hpp"
#include "dpssp/privacy.hpp"

namespace dpssp {

inline constexpr int kConfigVersion = 1;
inline constexpr const char* kCodeVersion = "0.1.0";

enum class Algorithm { kSmdVertex, kSmdBiasReduced, kBoosted, kDpSco, kNonprivateSmd };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);  // throws ConfigError

struct PlanOverrides {
  std::optional<std::int64_t> T, K, q, batch;
  std::optional<double> tau, U, alpha;
  std::optional<int> M;
};

struct ExperimentConfig {
  std::string problem_json;  // the "problem" object, re-serialized
  std::filesystem::path base_dir;  // relative file paths resolve here
  Algorithm algorithm = Algorithm::kSmdVertex;
  Mode mode = Mode::kQuadratic;
  double epsilon = 1.0;
  double delta = 1e-5;
  std::vector<std::size_t> n_grid;
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  PlanOverrides overrides;
  std::optional<double> boost_beta;
  std::optional<std::size_t> boost_I, boost_J;
  std::int64_t eval_inner_T = 10000;
};

// JSON text -> config. Parse and schema errors raise ConfigError.
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

struct RunRecord {
  std::size_t trial = 0;
  std::size_t n = 0;
  std::string algorithm;
  std::string mode;
  std::string metric;
  double metric_value = 0.0;
  double inner_error_bound = 0.0;
  std::size_t samples_used = 0;
  std::size_t steps_run = 0;
  std::size_t vertex_draws = 0;
  double wall_time_ms = 0.0;
  std::uint64_t seed = 0;
  std::string plan_json;
};

struct RunOptions {
  unsigned jobs = 1;
  bool record_timing = false;  // wall_time_ms stays 0 otherwise
};

// Plans every n first (budget errors surface before any solver work), then
// runs all (n, trial) pairs. Records come back in (n, trial) order.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config,
                                      const RunOptions& options = {});

inline constexpr const char* kCsvHeader =
    "trial,n,algorithm,mode,metric,metric_value,inner_error_bound,samples_used,"
    "steps_run,vertex_draws,wall_time_ms,seed,plan_json";

std::string format_csv_row(const RunRecord& r);
// Appends rows; writes the header only when the file is new or empty.
void append_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records);

std::uint64_t fnv1a64(std::string_view text);
std::filesystem::path metadata_path(const std::filesystem::path& csv);
// Adds one entry (config hash, code version, master seed, rows) to the
// sibling metadata file.
void append_metadata(const std::filesystem::path& csv, std::string_view config_text,
                     const ExperimentConfig& config, std::size_t rows);

// JSON report for the given suites. Fixed seed gives identical bytes.
std::string verify_report_json(const std::vector<SuiteReport>& reports, std::uint64_t seed);

struct SynthRun {
  std::vector<std::size_t> categories;
  std::string report_json;
};

// Config with a synth_data problem that carries data (data or data_file).
SynthRun run_synth(const ExperimentConfig& config);

// 0 ok, 2 config / parameter / shape, 3 budget, 4 dataset, 5 oracle, 1 other.
int exit_code_for(ErrorKind kind);

}  // namespace dpssp

#endif  // DPSSP_EXPERIMENT_HPP_
