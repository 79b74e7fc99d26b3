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

#include "dpssp/saddle_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "dpssp/sco_solver.hpp"

namespace dpssp {
namespace {

void check_dims(const PerSampleObjective& obj) {
  if (obj.dim_x() < 1 || obj.dim_y() < 1)
    throw ShapeError("objective dimensions must be at least 1");
}

SimplexPoint counts_to_point(const VectorXd& counts, double total) {
  return SimplexPoint(counts / total);
}

}  // namespace

SaddleSolution solve_smd_vertex(const PerSampleObjective& obj, Dataset& dataset,
                                const SsmdPlan& plan, const PrivacyParams& privacy,
                                RngStream& rng, const SolverOptions& options) {
  check_dims(obj);
  const Constants c = obj.constants();
  check_plan(plan, dataset.size(), privacy, c);
  const std::size_t need = static_cast<std::size_t>(plan.T * plan.batch);
  if (need > dataset.remaining())
    throw DatasetError("solve_smd_vertex: plan needs " + std::to_string(need) +
                       " samples, " + std::to_string(dataset.remaining()) + " left");

  const Index dx = obj.dim_x(), dy = obj.dim_y();
  LogWeights wx = LogWeights::uniform(dx), wy = LogWeights::uniform(dy);
  VectorXd count_x = VectorXd::Zero(dx), count_y = VectorXd::Zero(dy);
  SimplexPoint avg_x = SimplexPoint::uniform(dx), avg_y = SimplexPoint::uniform(dy);
  SaddleSolution out{avg_x, avg_y, 0, 0, 0};
  std::size_t min_batch = std::numeric_limits<std::size_t>::max();

  for (std::int64_t t = 1; t <= plan.T; ++t) {
    const SimplexPoint x = to_point(wx);
    const SimplexPoint y = to_point(wy);
    const SimplexPoint xq = options.exact_iterates ? x : sparsify(x, plan.K, rng);
    const SimplexPoint yq = options.exact_iterates ? y : sparsify(y, plan.K, rng);
    Batch batch = dataset.take(static_cast<std::size_t>(plan.batch));
    out.samples_used += batch.size();
    min_batch = std::min(min_batch, batch.size());
    const SaddleGradient g = batch_gradient(obj, xq, yq, batch);

    if (options.exact_iterates) {
      avg_x = running_average(avg_x, x, t);
      avg_y = running_average(avg_y, y, t);
    } else {
      count_x[sample_vertex(x, rng)] += 1.0;
      count_y[sample_vertex(y, rng)] += 1.0;
      out.vertex_draws += static_cast<std::size_t>(2 * plan.K + 2);
    }
    if (options.observer) options.observer({static_cast<std::size_t>(t), x, y, xq, yq, g});

    wx = mwu_step(wx, g.g_x, plan.tau);
    wy = mwu_step(wy, g.g_y, plan.tau);
    ++out.steps_run;
  }

  if (options.exact_iterates) {
    out.x = avg_x;
    out.y = avg_y;
  } else {
    out.x = counts_to_point(count_x, static_cast<double>(plan.T));
    out.y = counts_to_point(count_y, static_cast<double>(plan.T));
    // Each vertex draw is an exponential mechanism with budget 4 L0 tau / B.
    const double per = 4.0 * c.L0 * plan.tau / static_cast<double>(min_batch);
    const double allowed = advanced_composition_eps(
        static_cast<double>(out.vertex_draws), privacy.epsilon(), privacy.delta());
    if (!leq_tol(per, allowed))
      throw BudgetError("solve_smd_vertex: realized per-draw budget " +
                        std::to_string(per) + " exceeds " + std::to_string(allowed));
  }
  return out;
}

BrResult solve_smd_bias_reduced(const PerSampleObjective& obj, Dataset& dataset,
                                const BrPlan& plan, const PrivacyParams& privacy,
                                RngStream& rng, const SolverOptions& options) {
  check_dims(obj);
  const Constants c = obj.constants();
  check_plan(plan, dataset.size(), privacy, c);
  const TruncGeom tg(0.5, plan.M);
  const double top = std::ldexp(1.0, plan.M);

  const Index dx = obj.dim_x(), dy = obj.dim_y();
  LogWeights wx = LogWeights::uniform(dx), wy = LogWeights::uniform(dy);
  VectorXd count_x = VectorXd::Zero(dx), count_y = VectorXd::Zero(dy);
  BrResult res{{SimplexPoint::uniform(dx), SimplexPoint::uniform(dy), 0, 0, 0}, {}};
  BrRunTrace& tr = res.trace;

  while (tr.total_weight <= plan.U - top) {
    const int N = sample_trunc_geom(tg, rng);
    const double w = std::ldexp(1.0, N);
    const auto bsize = static_cast<std::size_t>(
        std::max(1.0, std::ceil(w / plan.alpha)));
    Batch batch = dataset.take(bsize);
    res.solution.samples_used += batch.size();

    const SimplexPoint x = to_point(wx);
    const SimplexPoint y = to_point(wy);
    const SaddleGradient g = bias_reduced_gradient(obj, x, y, N, batch, tg, rng);
    count_x[sample_vertex(x, rng)] += 1.0;
    count_y[sample_vertex(y, rng)] += 1.0;
    tr.mechanisms += bias_reduced_vertex_draws(N) + 2;
    if (options.observer)
      options.observer({res.solution.steps_run + 1, x, y, x, y, g});

    wx = mwu_step(wx, g.g_x, plan.tau);
    wy = mwu_step(wy, g.g_y, plan.tau);
    tr.N_sequence.push_back(N);
    tr.total_weight += w;
    ++res.solution.steps_run;
  }
  if (res.solution.steps_run == 0)
    throw BudgetError("solve_smd_bias_reduced: U leaves room for no step");
  tr.stop_step = res.solution.steps_run - 1;
  res.solution.vertex_draws = tr.mechanisms;
  const double steps = static_cast<double>(res.solution.steps_run);
  res.solution.x = counts_to_point(count_x, steps);
  res.solution.y = counts_to_point(count_y, steps);

  const double per = 9.0 * plan.tau * plan.alpha * c.L0;
  if (!adaptive_budget_ok(static_cast<double>(tr.mechanisms), per, privacy.epsilon(),
                          privacy.delta()))
    throw BudgetError("solve_smd_bias_reduced: realized spend of " +
                      std::to_string(tr.mechanisms) +
                      " releases exceeds the adaptive composition budget");
  return res;
}

double boost_score(const PerSampleObjective& obj, const SimplexPoint& x,
                   const SimplexPoint& y, const std::vector<SimplexPoint>& y_responses,
                   const std::vector<SimplexPoint>& x_responses, Batch scoring) {
  if (y_responses.empty() || x_responses.empty())
    throw InvalidParameterError("boost_score: no inner responses");
  double best_y = -std::numeric_limits<double>::infinity();
  for (const auto& yj : y_responses)
    best_y = std::max(best_y, obj.batch_value(x.coords(), yj.coords(), scoring));
  double best_x = std::numeric_limits<double>::infinity();
  for (const auto& xj : x_responses)
    best_x = std::min(best_x, obj.batch_value(xj.coords(), y.coords(), scoring));
  return best_y - best_x;
}

BoostedResult solve_boosted_with_candidates(
    const PerSampleObjective& obj,
    const std::vector<std::pair<SimplexPoint, SimplexPoint>>& candidates,
    const Dataset& responders_y, const Dataset& responders_x, const Dataset& scoring,
    std::size_t J, const PrivacyParams& privacy, RngStream& rng) {
  const std::size_t I = candidates.size();
  if (I == 0 || J == 0) throw InvalidParameterError("boosted: I and J must be positive");
  if (scoring.size() == 0) throw DatasetError("boosted: empty scoring part");
  const Constants c = obj.constants();
  if (!(c.B > 0.0)) throw InvalidParameterError("boosted: value bound B must be positive");

  const std::vector<Dataset> ys = responders_y.split(I * J);
  const std::vector<Dataset> xs = responders_x.split(I * J);
  BoostedResult res{{candidates[0].first, candidates[0].second, 0, 0, 0},
                    VectorXd::Zero(static_cast<Index>(I)), 0, 0.0};
  std::size_t samples = 0, draws = 0;

  for (std::size_t i = 0; i < I; ++i) {
    const auto& [xi, yi] = candidates[i];
    std::vector<SimplexPoint> y_resp, x_resp;
    for (std::size_t j = 0; j < J; ++j) {
      const std::size_t shard = i * J + j;
      for (int side = 0; side < 2; ++side) {
        Dataset part = side == 0 ? ys[shard] : xs[shard];
        const std::string name = std::string(side == 0 ? "y" : "x") +
                                 "-response shard " + std::to_string(shard) +
                                 " (" + std::to_string(part.size()) + " samples)";
        if (part.size() == 0) throw BudgetError("boosted: empty " + name);
        std::unique_ptr<ConvexObjective> inner;
        if (side == 0)
          inner = std::make_unique<NegSliceY>(obj, xi.coords());
        else
          inner = std::make_unique<SliceX>(obj, yi.coords());
        ScoPlan plan;
        try {
          plan = plan_alg5(part.size(), privacy, c, ell_single(inner->dim()),
                           Mode::kSecondOrder);
        } catch (const BudgetError& e) {
          throw BudgetError("boosted: " + name + " too small: " + e.what());
        }
        RngStream sub = rng.split(shard * 2 + static_cast<std::size_t>(side));
        ScoSolution s = solve_dp_sco(*inner, part, plan, privacy, sub);
        samples += s.samples_used;
        draws += s.vertex_draws;
        (side == 0 ? y_resp : x_resp).push_back(s.w_hat);
      }
    }
    res.scores[static_cast<Index>(i)] =
        boost_score(obj, xi, yi, y_resp, x_resp, scoring.all());
  }

  res.sensitivity = 4.0 * c.B / static_cast<double>(scoring.size());
  RngStream pick = rng.split(0x73656c656374ULL);
  res.selected = exp_mech_sample(-res.scores, res.sensitivity, privacy.epsilon(), pick);
  const auto& chosen = candidates[static_cast<std::size_t>(res.selected)];
  res.solution.x = chosen.first;
  res.solution.y = chosen.second;
  res.solution.samples_used = samples + scoring.size();
  res.solution.vertex_draws = draws;
  res.solution.steps_run = I * J * 2;
  return res;
}

BoostedResult solve_boosted(const PerSampleObjective& obj, const Dataset& dataset,
                            std::size_t I, std::size_t J,
                            const PrivacyParams& privacy, RngStream& rng) {
  if (I == 0 || J == 0) throw InvalidParameterError("boosted: I and J must be positive");
  const std::vector<Dataset> parts = dataset.split(4);
  const std::vector<Dataset> first = parts[0].split(I);
  const Constants c = obj.constants();
  const double ell = ell_saddle(obj.dim_x(), obj.dim_y());

  std::vector<std::pair<SimplexPoint, SimplexPoint>> candidates;
  std::size_t samples = 0, draws = 0, steps = 0;
  for (std::size_t i = 0; i < I; ++i) {
    Dataset shard = first[i];
    BrPlan plan;
    try {
      plan = plan_alg3(shard.size(), privacy, c, ell);
    } catch (const BudgetError& e) {
      throw BudgetError("boosted: candidate shard " + std::to_string(i) + " (" +
                        std::to_string(shard.size()) + " samples) too small: " +
                        e.what());
    }
    RngStream sub = rng.split(0x63616e64ULL + i);
    BrResult r = solve_smd_bias_reduced(obj, shard, plan, privacy, sub);
    samples += r.solution.samples_used;
    draws += r.solution.vertex_draws;
    steps += r.solution.steps_run;
    candidates.emplace_back(r.solution.x, r.solution.y);
  }

  RngStream sel = rng.split(0x626f6f7374ULL);
  BoostedResult res = solve_boosted_with_candidates(obj, candidates, parts[1], parts[2],
                                                    parts[3], J, privacy, sel);
  res.solution.samples_used += samples;
  res.solution.vertex_draws += draws;
  res.solution.steps_run += steps;
  return res;
}

std::pair<std::size_t, std::size_t> boost_defaults(double beta) {
  if (!(beta > 0.0 && beta < 1.0))
    throw InvalidParameterError("boost_defaults: beta must lie in (0, 1)");
  const auto I = static_cast<std::size_t>(std::ceil(std::log2(4.0 / beta)));
  const auto J = static_cast<std::size_t>(
      std::ceil(std::log2(8.0 * static_cast<double>(I) / beta)));
  return {I, J};
}

SaddleSolution solve_smd_nonprivate(const PerSampleObjective& obj, std::int64_t T,
                                    double tau, const StepObserver& observer) {
  check_dims(obj);
  if (T < 1) throw InvalidParameterError("solve_smd_nonprivate: T must be >= 1");
  const Index dx = obj.dim_x(), dy = obj.dim_y();
  LogWeights wx = LogWeights::uniform(dx), wy = LogWeights::uniform(dy);
  SimplexPoint avg_x = SimplexPoint::uniform(dx), avg_y = SimplexPoint::uniform(dy);
  for (std::int64_t t = 1; t <= T; ++t) {
    const SimplexPoint x = to_point(wx);
    const SimplexPoint y = to_point(wy);
    const SaddleGradient g{obj.population_grad_x(x.coords(), y.coords()),
                           -obj.population_grad_y(x.coords(), y.coords())};
    avg_x = running_average(avg_x, x, t);
    avg_y = running_average(avg_y, y, t);
    if (observer) observer({static_cast<std::size_t>(t), x, y, x, y, g});
    wx = mwu_step(wx, g.g_x, tau);
    wy = mwu_step(wy, g.g_y, tau);
  }
  return {avg_x, avg_y, 0, static_cast<std::size_t>(T), 0};
}

}  // namespace dpssp
