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

#include "dpssp/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dpssp {

std::string to_string(GapMethod m) {
  switch (m) {
    case GapMethod::kExactBilinear: return "exact_bilinear";
    case GapMethod::kExactBiaffine: return "exact_biaffine";
    case GapMethod::kInnerMirror: return "inner_mirror_ascent";
  }
  return "unknown";
}

GapReport exact_gap_bilinear(const MatrixXd& A, const SimplexPoint& x,
                             const SimplexPoint& y) {
  if (A.rows() != x.dim() || A.cols() != y.dim())
    throw ShapeError("exact_gap_bilinear: A is " + std::to_string(A.rows()) + "x" +
                     std::to_string(A.cols()) + ", points have dims " +
                     std::to_string(x.dim()) + " and " + std::to_string(y.dim()));
  const double best_y = (A.transpose() * x.coords()).maxCoeff();
  const double best_x = (A * y.coords()).minCoeff();
  return {best_y - best_x, 0.0, GapMethod::kExactBilinear};
}

GapReport exact_gap_biaffine(const PerSampleObjective& obj, const SimplexPoint& x,
                             const SimplexPoint& y) {
  if (!obj.is_biaffine()) throw OracleError("exact_gap_biaffine: objective not biaffine");
  if (x.dim() != obj.dim_x() || y.dim() != obj.dim_y())
    throw ShapeError("exact_gap_biaffine: dimension mismatch");
  // Affine in each block: F(x, e_j) - F(x, 0-direction) is the gradient entry,
  // so the vertex values are F(x, y) + g_j - <g, y>.
  const double f = obj.population_value(x.coords(), y.coords());
  const VectorXd gy = obj.population_grad_y(x.coords(), y.coords());
  const VectorXd gx = obj.population_grad_x(x.coords(), y.coords());
  const double over_y = f + gy.maxCoeff() - gy.dot(y.coords());
  const double under_x = f + gx.minCoeff() - gx.dot(x.coords());
  return {over_y - under_x, 0.0, GapMethod::kExactBiaffine};
}

GapReport gap_general(const PerSampleObjective& obj, const SimplexPoint& x,
                      const SimplexPoint& y, std::int64_t inner_T) {
  if (inner_T < 1) throw InvalidParameterError("gap_general: inner_T must be >= 1");
  if (x.dim() != obj.dim_x() || y.dim() != obj.dim_y())
    throw ShapeError("gap_general: dimension mismatch");
  const Constants c = obj.constants();
  const double T = static_cast<double>(inner_T);

  // max_v F(x, v): ascent on v, keep the best value seen.
  double upper = -std::numeric_limits<double>::infinity();
  {
    const double tau = std::sqrt(2.0 * ell_single(obj.dim_y()) / T) / c.L0;
    LogWeights w = LogWeights::uniform(obj.dim_y());
    SimplexPoint avg = SimplexPoint::uniform(obj.dim_y());
    for (std::int64_t t = 1; t <= inner_T; ++t) {
      const SimplexPoint v = to_point(w);
      upper = std::max(upper, obj.population_value(x.coords(), v.coords()));
      avg = running_average(avg, v, t);
      w = mwu_step(w, -obj.population_grad_y(x.coords(), v.coords()), tau);
    }
    upper = std::max(upper, obj.population_value(x.coords(), avg.coords()));
  }
  // min_w F(w, y): descent on w.
  double lower = std::numeric_limits<double>::infinity();
  {
    const double tau = std::sqrt(2.0 * ell_single(obj.dim_x()) / T) / c.L0;
    LogWeights w = LogWeights::uniform(obj.dim_x());
    SimplexPoint avg = SimplexPoint::uniform(obj.dim_x());
    for (std::int64_t t = 1; t <= inner_T; ++t) {
      const SimplexPoint u = to_point(w);
      lower = std::min(lower, obj.population_value(u.coords(), y.coords()));
      avg = running_average(avg, u, t);
      w = mwu_step(w, obj.population_grad_x(u.coords(), y.coords()), tau);
    }
    lower = std::min(lower, obj.population_value(avg.coords(), y.coords()));
  }
  const double ell = ell_saddle(obj.dim_x(), obj.dim_y());
  return {upper - lower, 2.0 * c.L0 * std::sqrt(ell / T), GapMethod::kInnerMirror};
}

GapReport evaluate_gap(const PerSampleObjective& obj, const SimplexPoint& x,
                       const SimplexPoint& y, std::int64_t inner_T) {
  if (auto A = obj.bilinear_payoff()) return exact_gap_bilinear(*A, x, y);
  if (obj.is_biaffine()) return exact_gap_biaffine(obj, x, y);
  return gap_general(obj, x, y, inner_T);
}

double smoothed_max(const MatrixXd& A, const VectorXd& x, double lambda) {
  if (!(lambda > 0.0)) throw InvalidParameterError("smoothed_max: lambda must be positive");
  if (A.rows() != x.size()) throw ShapeError("smoothed_max: dimension mismatch");
  const VectorXd s = A.transpose() * x / lambda;
  const double m = s.maxCoeff();
  return lambda * (m + std::log((s.array() - m).exp().sum()));
}

NashResult nash_value_bruteforce(const MatrixXd& A, std::int64_t max_iterations,
                                 double target_gap) {
  if (A.rows() < 1 || A.cols() < 1) throw ShapeError("nash: empty payoff");
  if (A.rows() > 50 || A.cols() > 50)
    throw InvalidParameterError("nash: dimensions above 50 are not supported");
  const double L = std::max(A.cwiseAbs().maxCoeff(), 1e-12);
  const double eta = 1.0 / L;
  const Index dx = A.rows(), dy = A.cols();

  // Extragradient in the log domain. Log weights are recentred now and then
  // so they stay bounded over long runs.
  VectorXd lx = VectorXd::Zero(dx), ly = VectorXd::Zero(dy);
  VectorXd sum_x = VectorXd::Zero(dx), sum_y = VectorXd::Zero(dy);
  auto soft = [](const VectorXd& l) {
    VectorXd p = (l.array() - l.maxCoeff()).exp().matrix();
    return VectorXd(p / p.sum());
  };
  const std::int64_t check_every = 500;
  for (std::int64_t it = 1; it <= max_iterations; ++it) {
    const VectorXd x = soft(lx), y = soft(ly);
    const VectorXd hx = soft(lx - eta * (A * y));
    const VectorXd hy = soft(ly + eta * (A.transpose() * x));
    lx -= eta * (A * hy);
    ly += eta * (A.transpose() * hx);
    lx.array() -= lx.maxCoeff();
    ly.array() -= ly.maxCoeff();
    sum_x += hx;
    sum_y += hy;
    if (it % check_every == 0 || it == max_iterations) {
      const double n = static_cast<double>(it);
      SimplexPoint ax(VectorXd(sum_x / n)), ay(VectorXd(sum_y / n));
      const double gap = exact_gap_bilinear(A, ax, ay).gap_estimate;
      if (gap <= target_gap) {
        const double value = ax.coords().dot(A * ay.coords());
        return {value, ax, ay, gap, it};
      }
    }
  }
  throw OracleError("nash: gap not certified below " + std::to_string(target_gap) +
                    " within " + std::to_string(max_iterations) + " iterations");
}

}  // namespace dpssp
