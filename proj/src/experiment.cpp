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

#include "dpssp/experiment.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <set>
#include <sstream>
#include <variant>

#include <json.hpp>

#include "dpssp/evaluation.hpp"
#include "dpssp/parallel.hpp"
#include "dpssp/problems.hpp"
#include "dpssp/saddle_solvers.hpp"
#include "dpssp/sco_solver.hpp"

namespace dpssp {

using json = nlohmann::json;

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kSmdVertex: return "smd_vertex";
    case Algorithm::kSmdBiasReduced: return "smd_bias_reduced";
    case Algorithm::kBoosted: return "boosted";
    case Algorithm::kDpSco: return "dp_sco";
    case Algorithm::kNonprivateSmd: return "nonprivate_smd";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& s) {
  for (Algorithm a : {Algorithm::kSmdVertex, Algorithm::kSmdBiasReduced, Algorithm::kBoosted,
                      Algorithm::kDpSco, Algorithm::kNonprivateSmd})
    if (to_string(a) == s) return a;
  throw ConfigError("unknown algorithm '" + s + "'");
}

// ---- Config -------------------------------------------------------------------

namespace {

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

const std::set<std::string> kProblemKinds = {"matrix_game", "matching_pennies", "synth_data",
                                             "max_loss", "quadratic_sco"};

}  // namespace

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  ExperimentConfig c;
  c.base_dir = base_dir;
  try {
    const json j = json::parse(text);
    only_keys(j, {"version", "problem", "algorithm", "mode", "epsilon", "delta", "n_grid",
                  "trials", "master_seed", "overrides", "boost", "eval"},
              "config");
    const int version = j.value("version", kConfigVersion);
    if (version != kConfigVersion)
      throw ConfigError("unsupported config version " + std::to_string(version));
    const json& p = j.at("problem");
    if (!p.is_object()) throw ConfigError("problem must be an object");
    const std::string kind = p.at("kind").get<std::string>();
    if (!kProblemKinds.count(kind)) throw ConfigError("unknown problem kind '" + kind + "'");
    c.problem_json = p.dump();

    c.algorithm = algorithm_from_string(j.value("algorithm", std::string("smd_vertex")));
    // The convex solver has no quadratic mode.
    c.mode = mode_from_string(j.value(
        "mode", std::string(c.algorithm == Algorithm::kDpSco ? "second_order" : "quadratic")));
    if (c.algorithm == Algorithm::kDpSco && c.mode == Mode::kQuadratic)
      throw ConfigError("dp_sco supports first_order and second_order modes only");
    c.epsilon = j.at("epsilon").get<double>();
    c.delta = j.at("delta").get<double>();
    if (j.contains("n_grid")) c.n_grid = j.at("n_grid").get<std::vector<std::size_t>>();
    for (std::size_t n : c.n_grid)
      if (n < 1) throw ConfigError("n_grid entries must be positive");
    c.trials = j.value("trials", std::size_t{1});
    if (c.trials < 1) throw ConfigError("trials must be at least 1");
    c.master_seed = j.value("master_seed", std::uint64_t{0});

    if (j.contains("overrides")) {
      const json& o = j.at("overrides");
      only_keys(o, {"T", "tau", "K", "q", "U", "M", "alpha", "batch"}, "overrides");
      if (o.contains("T")) c.overrides.T = o.at("T").get<std::int64_t>();
      if (o.contains("K")) c.overrides.K = o.at("K").get<std::int64_t>();
      if (o.contains("q")) c.overrides.q = o.at("q").get<std::int64_t>();
      if (o.contains("batch")) c.overrides.batch = o.at("batch").get<std::int64_t>();
      if (o.contains("tau")) c.overrides.tau = o.at("tau").get<double>();
      if (o.contains("U")) c.overrides.U = o.at("U").get<double>();
      if (o.contains("alpha")) c.overrides.alpha = o.at("alpha").get<double>();
      if (o.contains("M")) c.overrides.M = o.at("M").get<int>();
    }
    if (j.contains("boost")) {
      const json& b = j.at("boost");
      only_keys(b, {"beta", "I", "J"}, "boost");
      if (b.contains("beta")) c.boost_beta = b.at("beta").get<double>();
      if (b.contains("I")) c.boost_I = b.at("I").get<std::size_t>();
      if (b.contains("J")) c.boost_J = b.at("J").get<std::size_t>();
      if (c.boost_I.has_value() != c.boost_J.has_value())
        throw ConfigError("boost: give both I and J, or beta");
    }
    if (j.contains("eval")) {
      only_keys(j.at("eval"), {"inner_T"}, "eval");
      c.eval_inner_T = j.at("eval").value("inner_T", c.eval_inner_T);
      if (c.eval_inner_T < 1) throw ConfigError("eval.inner_T must be positive");
    }

    const bool sco_problem = kind == "quadratic_sco";
    if (sco_problem != (c.algorithm == Algorithm::kDpSco))
      throw ConfigError("dp_sco runs on quadratic_sco problems and nothing else");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  validate_privacy(c.epsilon, c.delta);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

// ---- Problem instances --------------------------------------------------------

namespace {

struct Instance {
  std::shared_ptr<const PerSampleObjective> saddle;
  std::shared_ptr<const QuadraticSco> sco;
  std::function<Dataset(std::size_t, RngStream&)> sample;
};

MatrixXd matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty())
    throw ConfigError(what + " must be a non-empty array of rows");
  const Index r = static_cast<Index>(j.size()), cols = static_cast<Index>(j[0].size());
  MatrixXd M(r, cols);
  for (Index i = 0; i < r; ++i) {
    if (j[i].size() != static_cast<std::size_t>(cols))
      throw ShapeError(what + ": ragged rows");
    for (Index k = 0; k < cols; ++k) M(i, k) = j[i][k].get<double>();
  }
  if (!M.allFinite()) throw InvalidParameterError(what + ": non-finite entries");
  return M;
}

std::filesystem::path resolve(const ExperimentConfig& c, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : c.base_dir / path;
}

RngStream problem_stream(const json& p, std::uint64_t master) {
  const std::uint64_t seed = p.value("seed", master);
  return RngStream(seed, derive_stream_id(seed, 0, role::kProblem));
}

SynthDataProblem synth_problem(const ExperimentConfig& c, const json& p, RngStream& rng) {
  only_keys(p, {"kind", "domain_size", "queries", "random_queries", "distribution", "data",
                "data_file", "seed"},
            "problem");
  SynthDataProblem s;
  s.domain_size = p.at("domain_size").get<Index>();
  if (s.domain_size < 1) throw ConfigError("domain_size must be positive");
  if (p.contains("queries")) {
    s.queries = matrix_from_json(p.at("queries"), "queries");
  } else if (p.contains("random_queries")) {
    const Index m = p.at("random_queries").get<Index>();
    if (m < 1) throw ConfigError("random_queries must be positive");
    s.queries.resize(m, s.domain_size);
    for (Index i = 0; i < m; ++i)
      for (Index z = 0; z < s.domain_size; ++z) s.queries(i, z) = 2.0 * rng.uniform() - 1.0;
  } else {
    throw ConfigError("synth_data needs queries or random_queries");
  }
  if (p.contains("distribution")) {
    const auto v = p.at("distribution").get<std::vector<double>>();
    s.distribution = Eigen::Map<const VectorXd>(v.data(), static_cast<Index>(v.size()));
  }
  if (p.contains("data")) {
    s.data = p.at("data").get<std::vector<SampleId>>();
  } else if (p.contains("data_file")) {
    s.data = load_categorical_csv(resolve(c, p.at("data_file").get<std::string>()));
  }
  for (SampleId z : s.data)
    if (z >= static_cast<SampleId>(s.domain_size))
      throw DatasetError("category " + std::to_string(z) + " outside the domain");
  s.validate();
  return s;
}

Instance build_instance_unchecked(const ExperimentConfig& c) {
  const json p = json::parse(c.problem_json);
  const std::string kind = p.at("kind").get<std::string>();
  RngStream rng = problem_stream(p, c.master_seed);
  Instance inst;
  if (kind == "matrix_game") {
    only_keys(p, {"kind", "payoff", "payoff_file", "random", "noise", "seed"}, "problem");
    const double noise = p.value("noise", 0.0);
    if (!(noise >= 0.0)) throw InvalidParameterError("noise must be nonnegative");
    std::shared_ptr<MatrixGame> g;
    if (p.contains("random")) {
      const json& r = p.at("random");
      only_keys(r, {"d_x", "d_y"}, "problem.random");
      g = std::make_shared<MatrixGame>(
          MatrixGame::random(r.at("d_x").get<Index>(), r.at("d_y").get<Index>(), noise, rng));
    } else {
      MatrixXd A;
      if (p.contains("payoff"))
        A = matrix_from_json(p.at("payoff"), "payoff");
      else if (p.contains("payoff_file"))
        A = load_payoff_binary(resolve(c, p.at("payoff_file").get<std::string>()));
      else
        throw ConfigError("matrix_game needs payoff, payoff_file or random");
      MatrixXd E(A.rows(), A.cols());
      for (Index i = 0; i < E.size(); ++i) E.data()[i] = noise * (2.0 * rng.uniform() - 1.0);
      g = std::make_shared<MatrixGame>(std::move(A), std::move(E));
    }
    inst.sample = [g](std::size_t n, RngStream& r) { return g->sample_dataset(n, r); };
    inst.saddle = g;
  } else if (kind == "matching_pennies") {
    only_keys(p, {"kind", "scale", "noise", "seed"}, "problem");
    auto g = std::make_shared<MatrixGame>(
        MatrixGame::matching_pennies(p.value("scale", 1.0), p.value("noise", 0.0)));
    inst.sample = [g](std::size_t n, RngStream& r) { return g->sample_dataset(n, r); };
    inst.saddle = g;
  } else if (kind == "synth_data") {
    auto s = std::make_shared<SynthDataProblem>(synth_problem(c, p, rng));
    inst.saddle = make_synth_data_objective(*s);
    inst.sample = [s](std::size_t n, RngStream& r) { return s->sample_dataset(n, r); };
  } else if (kind == "max_loss") {
    only_keys(p, {"kind", "d_x", "components", "symmetric", "noise", "seed"}, "problem");
    MaxLossProblem mp;
    if (p.value("symmetric", false))
      mp = MaxLossProblem::symmetric_pair(p.value("noise", 0.1));
    else
      mp = MaxLossProblem::random(p.at("d_x").get<Index>(), p.at("components").get<Index>(),
                                  rng);
    std::shared_ptr<const MaxLossObjective> o = make_max_loss_objective(mp);
    inst.sample = [o](std::size_t n, RngStream& r) { return o->sample_dataset(n, r); };
    inst.saddle = o;
  } else if (kind == "quadratic_sco") {
    only_keys(p, {"kind", "d", "seed"}, "problem");
    auto q = std::make_shared<QuadraticSco>(QuadraticSco::random(p.at("d").get<Index>(), rng));
    inst.sample = [q](std::size_t n, RngStream& r) { return q->sample_dataset(n, r); };
    inst.sco = q;
  } else {
    throw ConfigError("unknown problem kind '" + kind + "'");
  }
  return inst;
}

Instance build_instance(const ExperimentConfig& c) {
  try {
    return build_instance_unchecked(c);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  }
}

// ---- Plans --------------------------------------------------------------------

using AnyPlan = std::variant<SsmdPlan, BrPlan, ScoPlan, json>;

template <typename Plan, typename Planner>
Plan plan_or_override(Planner planner, bool overrides_complete) {
  try {
    return planner();
  } catch (const BudgetError&) {
    if (!overrides_complete) throw;
    return Plan{};
  }
}

std::pair<std::size_t, std::size_t> boost_IJ(const ExperimentConfig& c) {
  if (c.boost_I) {
    if (*c.boost_I < 1 || *c.boost_J < 1) throw ConfigError("boost: I and J must be positive");
    return {*c.boost_I, *c.boost_J};
  }
  return boost_defaults(c.boost_beta.value_or(0.1));
}

AnyPlan make_plan(const ExperimentConfig& c, const Instance& inst, std::size_t n,
                  const PrivacyParams& privacy) {
  const PlanOverrides& o = c.overrides;
  switch (c.algorithm) {
    case Algorithm::kSmdVertex: {
      const Constants k = inst.saddle->constants();
      const double ell = ell_saddle(inst.saddle->dim_x(), inst.saddle->dim_y());
      SsmdPlan plan = plan_or_override<SsmdPlan>(
          [&] { return plan_alg1(n, privacy, k, ell, c.mode); }, o.T && o.tau);
      plan.mode = c.mode;
      if (o.T) plan.T = *o.T;
      if (o.tau) plan.tau = *o.tau;
      if (o.K) plan.K = *o.K;
      if (o.batch) plan.batch = *o.batch;
      check_plan(plan, n, privacy, k);
      return plan;
    }
    case Algorithm::kSmdBiasReduced: {
      const Constants k = inst.saddle->constants();
      const double ell = ell_saddle(inst.saddle->dim_x(), inst.saddle->dim_y());
      BrPlan plan = plan_or_override<BrPlan>([&] { return plan_alg3(n, privacy, k, ell); },
                                             o.U && o.tau && o.alpha);
      if (o.U) plan.U = *o.U;
      if (o.M) plan.M = *o.M;
      if (o.alpha) plan.alpha = *o.alpha;
      if (o.tau) plan.tau = *o.tau;
      plan.C = bias_reduced_constant(k, ell, plan.M);
      check_plan(plan, n, privacy, k);
      return plan;
    }
    case Algorithm::kDpSco: {
      const Constants k = inst.sco->constants();
      ScoPlan plan = plan_or_override<ScoPlan>(
          [&] { return plan_alg5(n, privacy, k, ell_single(inst.sco->dim()), c.mode); },
          o.T && o.tau && o.q);
      plan.mode = c.mode;
      if (o.T) plan.T = *o.T;
      if (o.tau) plan.tau = *o.tau;
      if (o.K) plan.K = *o.K;
      if (o.q) plan.q = *o.q;
      if (o.batch) plan.batch = *o.batch;
      check_plan(plan, n, privacy, k);
      return plan;
    }
    case Algorithm::kBoosted: {
      // Dry run of the planners on the shard sizes the solver will use.
      const auto [I, J] = boost_IJ(c);
      const Constants k = inst.saddle->constants();
      const std::size_t part = n / 4;
      const std::size_t cand = part / I, inner = part / (I * J);
      try {
        plan_alg3(cand, privacy, k, ell_saddle(inst.saddle->dim_x(), inst.saddle->dim_y()));
        plan_alg5(inner, privacy, k, ell_single(inst.saddle->dim_x()), Mode::kSecondOrder);
        plan_alg5(inner, privacy, k, ell_single(inst.saddle->dim_y()), Mode::kSecondOrder);
      } catch (const BudgetError& e) {
        throw BudgetError("boosted at n=" + std::to_string(n) + ": " + e.what());
      }
      return json{{"I", I}, {"J", J}, {"candidate_shard", cand}, {"inner_shard", inner}};
    }
    case Algorithm::kNonprivateSmd: {
      const std::int64_t T = o.T.value_or(static_cast<std::int64_t>(n));
      if (T < 1) throw InvalidParameterError("nonprivate_smd: T must be positive");
      const double ell = ell_saddle(inst.saddle->dim_x(), inst.saddle->dim_y());
      const double tau =
          o.tau.value_or(std::sqrt(ell / static_cast<double>(T)) / inst.saddle->constants().L0);
      if (!(tau > 0.0)) throw InvalidParameterError("nonprivate_smd: tau must be positive");
      return json{{"T", T}, {"tau", tau}};
    }
  }
  throw ConfigError("unknown algorithm");
}

std::string plan_to_json(const AnyPlan& plan) {
  return std::visit(
      [](const auto& p) -> std::string {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, SsmdPlan>) {
          return json{{"T", p.T}, {"tau", p.tau}, {"K", p.K}, {"batch", p.batch},
                      {"mode", to_string(p.mode)}}
              .dump();
        } else if constexpr (std::is_same_v<P, BrPlan>) {
          return json{{"U", p.U}, {"M", p.M}, {"alpha", p.alpha}, {"tau", p.tau}, {"C", p.C}}
              .dump();
        } else if constexpr (std::is_same_v<P, ScoPlan>) {
          return json{{"T", p.T}, {"tau", p.tau}, {"K", p.K}, {"q", p.q},
                      {"batch", p.batch}, {"mode", to_string(p.mode)}}
              .dump();
        } else {
          return p.dump();
        }
      },
      plan);
}

void recheck(const AnyPlan& plan, std::size_t n, const PrivacyParams& privacy,
             const Constants& k) {
  if (auto* s = std::get_if<SsmdPlan>(&plan)) check_plan(*s, n, privacy, k);
  if (auto* b = std::get_if<BrPlan>(&plan)) check_plan(*b, n, privacy, k);
  if (auto* q = std::get_if<ScoPlan>(&plan)) check_plan(*q, n, privacy, k);
}

}  // namespace

// ---- Runner -------------------------------------------------------------------

std::vector<RunRecord> run_experiment(const ExperimentConfig& c, const RunOptions& options) {
  if (c.n_grid.empty()) throw ConfigError("n_grid is empty");
  const PrivacyParams privacy(c.epsilon, c.delta);
  const Instance inst = build_instance(c);
  std::vector<AnyPlan> plans;
  for (std::size_t n : c.n_grid) plans.push_back(make_plan(c, inst, n, privacy));

  const std::size_t total = c.n_grid.size() * c.trials;
  std::vector<RunRecord> out(total);
  parallel_for(total, options.jobs, [&](std::size_t idx) {
    const std::size_t gi = idx / c.trials, trial = idx % c.trials;
    const std::size_t n = c.n_grid[gi];
    const AnyPlan& plan = plans[gi];
    const std::uint64_t base = mix64(n) ^ trial;
    RngStream data_rng(c.master_seed, derive_stream_id(c.master_seed, base, role::kDataset));
    const std::uint64_t solver_id = derive_stream_id(c.master_seed, base, role::kSolver);
    RngStream solver_rng(c.master_seed, solver_id);

    RunRecord r;
    r.trial = trial;
    r.n = n;
    r.algorithm = to_string(c.algorithm);
    r.mode = to_string(c.mode);
    r.seed = solver_id;
    r.plan_json = plan_to_json(plan);

    const auto start = std::chrono::steady_clock::now();
    std::optional<SaddleSolution> sol;
    switch (c.algorithm) {
      case Algorithm::kSmdVertex: {
        Dataset d = inst.sample(n, data_rng);
        sol = solve_smd_vertex(*inst.saddle, d, std::get<SsmdPlan>(plan), privacy, solver_rng);
        break;
      }
      case Algorithm::kSmdBiasReduced: {
        Dataset d = inst.sample(n, data_rng);
        sol = solve_smd_bias_reduced(*inst.saddle, d, std::get<BrPlan>(plan), privacy,
                                     solver_rng)
                  .solution;
        break;
      }
      case Algorithm::kBoosted: {
        const json& jp = std::get<json>(plan);
        Dataset d = inst.sample(n, data_rng);
        sol = solve_boosted(*inst.saddle, d, jp.at("I").get<std::size_t>(),
                            jp.at("J").get<std::size_t>(), privacy, solver_rng)
                  .solution;
        break;
      }
      case Algorithm::kNonprivateSmd: {
        const json& jp = std::get<json>(plan);
        sol = solve_smd_nonprivate(*inst.saddle, jp.at("T").get<std::int64_t>(),
                                   jp.at("tau").get<double>());
        break;
      }
      case Algorithm::kDpSco: {
        Dataset d = inst.sample(n, data_rng);
        const ScoSolution s =
            solve_dp_sco(*inst.sco, d, std::get<ScoPlan>(plan), privacy, solver_rng);
        r.metric = "excess_risk";
        r.metric_value = inst.sco->population_value(s.w_hat.coords()) -
                         inst.sco->population_value(inst.sco->minimizer().coords());
        r.samples_used = s.samples_used;
        r.steps_run = s.steps_run;
        r.vertex_draws = s.vertex_draws;
        break;
      }
    }
    if (sol) {
      const GapReport g = evaluate_gap(*inst.saddle, sol->x, sol->y, c.eval_inner_T);
      r.metric = "gap";
      r.metric_value = g.gap_estimate;
      r.inner_error_bound = g.inner_error_bound;
      r.samples_used = sol->samples_used;
      r.steps_run = sol->steps_run;
      r.vertex_draws = sol->vertex_draws;
    }
    if (options.record_timing)
      r.wall_time_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                           .count();
    if (!std::isfinite(r.metric_value) || !std::isfinite(r.inner_error_bound))
      throw NumericError("trial " + std::to_string(trial) + " at n=" + std::to_string(n) +
                         ": non-finite metric");
    out[idx] = std::move(r);
  });

  // Echoed plans are re-validated before anything is written.
  const Constants k = inst.saddle ? inst.saddle->constants() : inst.sco->constants();
  for (std::size_t gi = 0; gi < c.n_grid.size(); ++gi)
    recheck(plans[gi], c.n_grid[gi], privacy, k);
  return out;
}

// ---- Output -------------------------------------------------------------------

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

}  // namespace

std::string format_csv_row(const RunRecord& r) {
  std::ostringstream os;
  os << r.trial << ',' << r.n << ',' << r.algorithm << ',' << r.mode << ',' << r.metric << ','
     << fmt_double(r.metric_value) << ',' << fmt_double(r.inner_error_bound) << ','
     << r.samples_used << ',' << r.steps_run << ',' << r.vertex_draws << ','
     << fmt_double(r.wall_time_ms) << ',' << r.seed << ',' << csv_quote(r.plan_json);
  return os.str();
}

void append_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records) {
  std::error_code ec;
  const bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error("cannot open output " + path.string());
  if (fresh) out << kCsvHeader << '\n';
  for (const auto& r : records) out << format_csv_row(r) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::filesystem::path metadata_path(const std::filesystem::path& csv) {
  std::filesystem::path p = csv;
  p += ".meta.json";
  return p;
}

void append_metadata(const std::filesystem::path& csv, std::string_view config_text,
                     const ExperimentConfig& config, std::size_t rows) {
  const auto path = metadata_path(csv);
  json meta = {{"runs", json::array()}};
  if (std::filesystem::exists(path)) {
    std::ifstream in(path);
    try {
      meta = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError("unreadable metadata file " + path.string() + ": " + e.what());
    }
  }
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, fnv1a64(config_text));
  meta["runs"].push_back({{"config_hash", std::string("fnv1a64:") + hash},
                          {"code_version", kCodeVersion},
                          {"config_version", kConfigVersion},
                          {"master_seed", config.master_seed},
                          {"rows", rows}});
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << meta.dump(2) << '\n';
}

std::string verify_report_json(const std::vector<SuiteReport>& reports, std::uint64_t seed) {
  json suites = json::array();
  std::size_t passed = 0;
  bool warn = false;
  for (const auto& r : reports) {
    json details = json::object();
    for (const auto& [k, v] : r.details) details[k] = v;
    json s = {{"name", r.name},         {"pass", r.pass},      {"reps", r.reps},
              {"measured", r.measured}, {"bound", r.bound},    {"mc_slack", r.mc_slack},
              {"insufficient_reps", r.insufficient_reps},      {"details", details}};
    if (r.insufficient_reps)
      s["warning"] = "fewer than " + std::to_string(kMinSuiteReps) + " reps";
    suites.push_back(std::move(s));
    passed += r.pass ? 1 : 0;
    warn = warn || r.insufficient_reps;
  }
  json j = {{"seed", seed},
            {"code_version", kCodeVersion},
            {"passed", passed},
            {"total", reports.size()},
            {"insufficient_reps", warn},
            {"suites", suites}};
  return j.dump(2) + "\n";
}

SynthRun run_synth(const ExperimentConfig& c) {
  const json p = json::parse(c.problem_json);
  if (p.at("kind").get<std::string>() != "synth_data")
    throw ConfigError("synth needs a synth_data problem");
  RngStream prng = problem_stream(p, c.master_seed);
  SynthDataProblem s;
  try {
    s = synth_problem(c, p, prng);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  }
  if (s.data.empty()) throw DatasetError("synth: problem has no data or data_file");
  const PrivacyParams privacy(c.epsilon, c.delta);
  RngStream rng(c.master_seed, derive_stream_id(c.master_seed, 0, role::kSolver));
  const SynthResult res = synth_data_generate(s, privacy, rng);

  SynthRun run;
  run.categories.assign(res.synthetic.begin(), res.synthetic.end());
  json errs = json::array();
  for (Index i = 0; i < res.per_query_error.size(); ++i) errs.push_back(res.per_query_error[i]);
  json report = {{"n", s.data.size()},
                 {"domain_size", s.domain_size},
                 {"queries", s.queries.rows()},
                 {"epsilon", c.epsilon},
                 {"delta", c.delta},
                 {"master_seed", c.master_seed},
                 {"reference", s.distribution.size() ? "distribution" : "empirical"},
                 {"plan", json::parse(plan_to_json(res.plan))},
                 {"max_error", res.max_error},
                 {"per_query_error", errs}};
  run.report_json = report.dump(2) + "\n";
  return run;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
    case ErrorKind::kInvalidParameter:
    case ErrorKind::kShape: return 2;
    case ErrorKind::kBudget: return 3;
    case ErrorKind::kDataset: return 4;
    case ErrorKind::kOracle: return 5;
    case ErrorKind::kNumeric: return 1;
  }
  return 1;
}

}  // namespace dpssp
