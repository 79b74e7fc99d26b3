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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "dpssp/experiment.hpp"

namespace {

unsigned default_jobs() {
  if (const char* env = std::getenv("DPSSP_JOBS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid DPSSP_JOBS='" << env << "'\n";
  }
  return 1;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw dpssp::ConfigError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private saddle-point and convex solvers on simplices"};
  app.require_subcommand(1);

  std::string config_path, out_path, suite = "all";
  unsigned jobs = default_jobs();
  bool record_timing = false;
  std::size_t reps = 100000;
  std::uint64_t seed = 20240601;

  auto* run = app.add_subcommand("run", "Run an experiment grid and append CSV rows");
  run->add_option("--config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_path, "CSV output (appended)")->required();
  run->add_option("--jobs", jobs, "Worker threads (default $DPSSP_JOBS or 1)")
      ->check(CLI::PositiveNumber);
  run->add_flag("--record-timing", record_timing, "Fill wall_time_ms (breaks byte identity)");

  auto* verify = app.add_subcommand("verify", "Monte-Carlo checks of the sparsification bounds");
  verify->add_option("--suite", suite, "Suite name or 'all'");
  verify->add_option("--reps", reps, "Repetitions per suite")->check(CLI::PositiveNumber);
  verify->add_option("--out", out_path, "JSON report")->required();
  verify->add_option("--seed", seed, "Master seed");
  verify->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* synth = app.add_subcommand("synth", "Private synthetic data for a query workload");
  synth->add_option("--config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
  synth->add_option("--out", out_path, "Category CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      const std::string text = read_text(config_path);
      const dpssp::ExperimentConfig cfg =
          dpssp::parse_config(text, std::filesystem::path(config_path).parent_path());
      const auto records = dpssp::run_experiment(cfg, {jobs, record_timing});
      dpssp::append_csv(out_path, records);
      dpssp::append_metadata(out_path, text, cfg, records.size());
      std::cerr << records.size() << " rows appended to " << out_path << "\n";
      return 0;
    }
    if (*verify) {
      std::vector<dpssp::MaureySuite> suites;
      if (suite == "all") {
        suites = dpssp::all_maurey_suites();
      } else if (auto s = dpssp::suite_from_name(suite)) {
        suites.push_back(*s);
      } else {
        std::cerr << "error: unknown suite '" << suite << "'; choose from all";
        for (auto s2 : dpssp::all_maurey_suites()) std::cerr << ", " << dpssp::suite_name(s2);
        std::cerr << "\n";
        return 2;
      }
      std::vector<dpssp::SuiteReport> reports;
      bool ok = true;
      for (auto s : suites) {
        reports.push_back(dpssp::verify_maurey_suite(s, reps, seed, jobs));
        const auto& r = reports.back();
        ok = ok && r.pass;
        std::cerr << (r.pass ? "PASS " : "FAIL ") << r.name << " measured=" << r.measured
                  << " bound=" << r.bound << " slack=" << r.mc_slack
                  << (r.insufficient_reps ? " (warning: insufficient reps)" : "") << "\n";
      }
      write_text(out_path, dpssp::verify_report_json(reports, seed));
      return ok ? 0 : 1;
    }
    if (*synth) {
      const dpssp::ExperimentConfig cfg = dpssp::load_config(config_path);
      const dpssp::SynthRun res = dpssp::run_synth(cfg);
      std::ostringstream os;
      for (std::size_t z : res.categories) os << z << '\n';
      write_text(out_path, os.str());
      write_text(out_path + ".report.json", res.report_json);
      return 0;
    }
  } catch (const dpssp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return dpssp::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
