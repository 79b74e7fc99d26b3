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

#ifndef DPSSP_SCO_SOLVER_HPP_
#define DPSSP_SCO_SOLVER_HPP_

#include <cstddef>
#include <functional>
#include <vector>

#include "dpssp/oracles.hpp"
#include "dpssp/privacy.hpp"

namespace dpssp {

struct ScoSolution {
  SimplexPoint w_hat;
  std::size_t samples_used = 0;
  std::size_t refresh_count = 0;
  std::size_t steps_run = 0;
  std::size_t vertex_draws = 0;
};

// Per-step record: iterate x_t, running average w^t and the gradient g_t
// evaluated at the cached sparsified average.
struct ScoTrace {
  std::vector<VectorXd> x;
  std::vector<VectorXd> w;
  std::vector<VectorXd> g;
  std::vector<std::size_t> refresh_steps;
  double max_scaled_move = 0.0;  // max_t t * ||w^t - w^{t-1}||_1
};

struct ScoOptions {
  // Replace every sparsification by the exact point (not private).
  bool exact_iterates = false;
  ScoTrace* trace = nullptr;
};

// Number of refreshes for a (T, q) schedule, including the final one.
std::size_t sco_refresh_count(std::int64_t T, std::int64_t q);

// Anytime online-to-batch mirror descent with epoch-cached sparsified
// averages. Re-audits the step bound from the realized refresh count.
ScoSolution solve_dp_sco(const ConvexObjective& obj, Dataset& dataset,
                         const ScoPlan& plan, const PrivacyParams& privacy,
                         RngStream& rng, const ScoOptions& options = {});

struct RegretDecomposition {
  double regret = 0.0;    // sum_t <g_t, x_t - u>
  double coupling = 0.0;  // sum_t <grad F(w^t) - g_t, x_t - u>
  double bound = 0.0;     // (regret + coupling) / T
  std::size_t T = 0;
};

// Needs the population gradient of obj. Throws OracleError when the trace
// is empty or inconsistent.
RegretDecomposition anytime_average_regret_decomposition(const ConvexObjective& obj,
                                                         const ScoTrace& trace,
                                                         const VectorXd& comparator);

// x -> f(x, y; z) for a fixed y.
class SliceX : public ConvexObjective {
 public:
  SliceX(const PerSampleObjective& obj, VectorXd y) : obj_(obj), y_(std::move(y)) {}
  Index dim() const override { return obj_.dim_x(); }
  Constants constants() const override { return obj_.constants(); }
  double value(const VectorXd& x, SampleId z) const override {
    return obj_.value(x, y_, z);
  }
  VectorXd grad(const VectorXd& x, SampleId z) const override {
    return obj_.grad_x(x, y_, z);
  }
  double batch_value(const VectorXd& x, Batch b) const override {
    return obj_.batch_value(x, y_, b);
  }
  VectorXd batch_grad(const VectorXd& x, Batch b) const override {
    return obj_.batch_grad_x(x, y_, b);
  }
  bool has_population() const override { return obj_.has_population(); }
  double population_value(const VectorXd& x) const override {
    return obj_.population_value(x, y_);
  }
  VectorXd population_grad(const VectorXd& x) const override {
    return obj_.population_grad_x(x, y_);
  }

 private:
  const PerSampleObjective& obj_;
  VectorXd y_;
};

// y -> -f(x, y; z) for a fixed x, so maximizing over y becomes minimizing.
class NegSliceY : public ConvexObjective {
 public:
  NegSliceY(const PerSampleObjective& obj, VectorXd x) : obj_(obj), x_(std::move(x)) {}
  Index dim() const override { return obj_.dim_y(); }
  Constants constants() const override { return obj_.constants(); }
  double value(const VectorXd& y, SampleId z) const override {
    return -obj_.value(x_, y, z);
  }
  VectorXd grad(const VectorXd& y, SampleId z) const override {
    return -obj_.grad_y(x_, y, z);
  }
  double batch_value(const VectorXd& y, Batch b) const override {
    return -obj_.batch_value(x_, y, b);
  }
  VectorXd batch_grad(const VectorXd& y, Batch b) const override {
    return -obj_.batch_grad_y(x_, y, b);
  }
  bool has_population() const override { return obj_.has_population(); }
  double population_value(const VectorXd& y) const override {
    return -obj_.population_value(x_, y);
  }
  VectorXd population_grad(const VectorXd& y) const override {
    return -obj_.population_grad_y(x_, y);
  }

 private:
  const PerSampleObjective& obj_;
  VectorXd x_;
};

}  // namespace dpssp

#endif  // DPSSP_SCO_SOLVER_HPP_
