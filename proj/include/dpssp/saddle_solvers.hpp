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

#ifndef DPSSP_SADDLE_SOLVERS_HPP_
#define DPSSP_SADDLE_SOLVERS_HPP_

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "dpssp/oracles.hpp"
#include "dpssp/privacy.hpp"

namespace dpssp {

struct SaddleSolution {
  SimplexPoint x;
  SimplexPoint y;
  std::size_t samples_used = 0;
  std::size_t steps_run = 0;
  std::size_t vertex_draws = 0;
};

// What an observer sees at step t (1-based): the iterates, the points the
// gradient was taken at and the gradient itself.
struct SaddleStep {
  std::size_t t;
  const SimplexPoint& x;
  const SimplexPoint& y;
  const SimplexPoint& x_query;
  const SimplexPoint& y_query;
  const SaddleGradient& g;
};

using StepObserver = std::function<void(const SaddleStep&)>;

struct SolverOptions {
  // Sparsification replaced by the identity and the output taken as the
  // exact iterate average. Not private; used to isolate the sampling layer.
  bool exact_iterates = false;
  StepObserver observer;
};

// Vertex-sampled private stochastic mirror descent.
SaddleSolution solve_smd_vertex(const PerSampleObjective& obj, Dataset& dataset,
                                const SsmdPlan& plan, const PrivacyParams& privacy,
                                RngStream& rng, const SolverOptions& options = {});

struct BrRunTrace {
  std::vector<int> N_sequence;
  double total_weight = 0.0;   // sum of 2^N_t over executed steps
  std::size_t stop_step = 0;   // last executed step index, counting from 0
  std::size_t mechanisms = 0;  // vertex draws, each a pure-DP release
};

struct BrResult {
  SaddleSolution solution;
  BrRunTrace trace;
};

// Bias-reduced variant with a random stopping time.
BrResult solve_smd_bias_reduced(const PerSampleObjective& obj, Dataset& dataset,
                                const BrPlan& plan, const PrivacyParams& privacy,
                                RngStream& rng, const SolverOptions& options = {});

// Per-candidate selection score
//   G = max_j F_S(x, y_j) - min_j F_S(x_j, y)
// over the inner responses, with F_S the empirical mean on `scoring`.
double boost_score(const PerSampleObjective& obj, const SimplexPoint& x,
                   const SimplexPoint& y, const std::vector<SimplexPoint>& y_responses,
                   const std::vector<SimplexPoint>& x_responses, Batch scoring);

struct BoostedResult {
  SaddleSolution solution;
  VectorXd scores;  // G_i per candidate
  Index selected = 0;
  double sensitivity = 0.0;
};

// Selection stage on given candidates: J inner DP-SCO solves per candidate
// and side on shards of `responders_y` / `responders_x`, scoring on
// `scoring`, then the exponential mechanism on -G.
BoostedResult solve_boosted_with_candidates(
    const PerSampleObjective& obj, const std::vector<std::pair<SimplexPoint, SimplexPoint>>& candidates,
    const Dataset& responders_y, const Dataset& responders_x, const Dataset& scoring,
    std::size_t J, const PrivacyParams& privacy, RngStream& rng);

// Full boosted solver: four equal parts, I bias-reduced candidate runs on
// part one, then the selection stage.
BoostedResult solve_boosted(const PerSampleObjective& obj, const Dataset& dataset,
                            std::size_t I, std::size_t J,
                            const PrivacyParams& privacy, RngStream& rng);

// I = ceil(log2(4/beta)), J = ceil(log2(8 I / beta)).
std::pair<std::size_t, std::size_t> boost_defaults(double beta);

// Non-private entropic SMD on the population objective; returns the
// averages of x^1..x^T and y^1..y^T.
SaddleSolution solve_smd_nonprivate(const PerSampleObjective& obj, std::int64_t T,
                                    double tau, const StepObserver& observer = {});

}  // namespace dpssp

#endif  // DPSSP_SADDLE_SOLVERS_HPP_
