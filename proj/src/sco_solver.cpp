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

#include "dpssp/sco_solver.hpp"

#include <cmath>
#include <string>

namespace dpssp {

std::size_t sco_refresh_count(std::int64_t T, std::int64_t q) {
  if (T < 1 || q < 1 || q > T)
    throw InvalidParameterError("sco_refresh_count: need 1 <= q <= T");
  // Steps 1..q, then every multiple of q above q, then the return line.
  return static_cast<std::size_t>(q + (T / q - 1) + 1);
}

ScoSolution solve_dp_sco(const ConvexObjective& obj, Dataset& dataset,
                         const ScoPlan& plan, const PrivacyParams& privacy,
                         RngStream& rng, const ScoOptions& options) {
  const Constants c = obj.constants();
  check_plan(plan, dataset.size(), privacy, c);
  const std::size_t need = static_cast<std::size_t>(plan.T * plan.batch);
  if (need > dataset.remaining())
    throw DatasetError("solve_dp_sco: plan needs " + std::to_string(need) +
                       " samples, " + std::to_string(dataset.remaining()) + " left");

  const Index d = obj.dim();
  LogWeights wx = LogWeights::uniform(d);
  SimplexPoint w = SimplexPoint::uniform(d);
  SimplexPoint w_hat = w;
  ScoSolution out{w, 0, 0, 0, 0};
  ScoTrace* trace = options.trace;
  if (trace) *trace = ScoTrace{};

  for (std::int64_t t = 1; t <= plan.T; ++t) {
    const SimplexPoint x = to_point(wx);
    SimplexPoint w_next = running_average(w, x, t);
    if (t > 1) {
      const double move = (w_next.coords() - w.coords()).lpNorm<1>();
      if (move > 2.0 / static_cast<double>(t) + 1e-12)
        throw NumericError("solve_dp_sco: average moved more than 2/t at step " +
                           std::to_string(t));
      if (trace)
        trace->max_scaled_move =
            std::max(trace->max_scaled_move, static_cast<double>(t) * move);
    }
    w = std::move(w_next);

    if (t <= plan.q || t % plan.q == 0) {
      w_hat = options.exact_iterates ? w : sparsify(w, plan.K, rng);
      ++out.refresh_count;
      out.vertex_draws += static_cast<std::size_t>(plan.K);
      if (trace) trace->refresh_steps.push_back(static_cast<std::size_t>(t));
    }

    Batch batch = dataset.take(static_cast<std::size_t>(plan.batch));
    out.samples_used += batch.size();
    VectorXd g = obj.batch_grad(w_hat.coords(), batch);
    if (trace) {
      trace->x.push_back(x.coords());
      trace->w.push_back(w.coords());
      trace->g.push_back(g);
    }
    wx = mwu_step(wx, g, plan.tau);
    ++out.steps_run;
  }

  out.w_hat = options.exact_iterates ? w : sparsify(w, plan.K, rng);
  ++out.refresh_count;
  out.vertex_draws += static_cast<std::size_t>(plan.K);

  // Runtime audit from what actually happened.
  const double m = static_cast<double>(out.vertex_draws);
  const double cap = static_cast<double>(plan.batch) * privacy.epsilon() /
                     (8.0 * c.L0 * std::sqrt(2.0 * m * privacy.log_inv_delta()));
  if (!leq_tol(plan.tau, cap) ||
      !leq_tol(plan.tau, 1.0 / (4.0 * c.L0 * static_cast<double>(plan.q))))
    throw BudgetError("solve_dp_sco: realized refresh count " +
                      std::to_string(out.refresh_count) +
                      " violates the step bound");
  return out;
}

RegretDecomposition anytime_average_regret_decomposition(const ConvexObjective& obj,
                                                         const ScoTrace& trace,
                                                         const VectorXd& comparator) {
  if (trace.x.empty() || trace.x.size() != trace.w.size() ||
      trace.x.size() != trace.g.size())
    throw OracleError("regret decomposition: trajectory missing or inconsistent");
  if (comparator.size() != obj.dim())
    throw ShapeError("regret decomposition: comparator dimension mismatch");
  RegretDecomposition r;
  r.T = trace.x.size();
  for (std::size_t t = 0; t < r.T; ++t) {
    const VectorXd diff = trace.x[t] - comparator;
    r.regret += trace.g[t].dot(diff);
    r.coupling += (obj.population_grad(trace.w[t]) - trace.g[t]).dot(diff);
  }
  r.bound = (r.regret + r.coupling) / static_cast<double>(r.T);
  return r;
}

}  // namespace dpssp
