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

#include "dpssp/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dpssp {

double PerSampleObjective::batch_value(const VectorXd& x, const VectorXd& y,
                                       Batch batch) const {
  if (batch.empty()) throw InvalidParameterError("batch_value: empty batch");
  double acc = 0.0;
  for (SampleId z : batch) acc += value(x, y, z);
  return acc / static_cast<double>(batch.size());
}

VectorXd PerSampleObjective::batch_grad_x(const VectorXd& x, const VectorXd& y,
                                          Batch batch) const {
  if (batch.empty()) throw InvalidParameterError("batch_grad_x: empty batch");
  VectorXd acc = VectorXd::Zero(dim_x());
  for (SampleId z : batch) acc += grad_x(x, y, z);
  return acc / static_cast<double>(batch.size());
}

VectorXd PerSampleObjective::batch_grad_y(const VectorXd& x, const VectorXd& y,
                                          Batch batch) const {
  if (batch.empty()) throw InvalidParameterError("batch_grad_y: empty batch");
  VectorXd acc = VectorXd::Zero(dim_y());
  for (SampleId z : batch) acc += grad_y(x, y, z);
  return acc / static_cast<double>(batch.size());
}

double PerSampleObjective::population_value(const VectorXd&, const VectorXd&) const {
  throw OracleError("objective has no population view");
}
VectorXd PerSampleObjective::population_grad_x(const VectorXd&, const VectorXd&) const {
  throw OracleError("objective has no population view");
}
VectorXd PerSampleObjective::population_grad_y(const VectorXd&, const VectorXd&) const {
  throw OracleError("objective has no population view");
}

double ConvexObjective::batch_value(const VectorXd& x, Batch batch) const {
  if (batch.empty()) throw InvalidParameterError("batch_value: empty batch");
  double acc = 0.0;
  for (SampleId z : batch) acc += value(x, z);
  return acc / static_cast<double>(batch.size());
}

VectorXd ConvexObjective::batch_grad(const VectorXd& x, Batch batch) const {
  if (batch.empty()) throw InvalidParameterError("batch_grad: empty batch");
  VectorXd acc = VectorXd::Zero(dim());
  for (SampleId z : batch) acc += grad(x, z);
  return acc / static_cast<double>(batch.size());
}

double ConvexObjective::population_value(const VectorXd&) const {
  throw OracleError("objective has no population view");
}
VectorXd ConvexObjective::population_grad(const VectorXd&) const {
  throw OracleError("objective has no population view");
}

Batch Dataset::take(std::size_t count) {
  if (count > remaining()) {
    throw DatasetError("dataset exhausted: requested " + std::to_string(count) +
                       " samples with " + std::to_string(remaining()) +
                       " of " + std::to_string(size()) + " left");
  }
  Batch out(samples_.data() + cursor_, count);
  cursor_ += count;
  return out;
}

Dataset Dataset::slice(std::size_t begin, std::size_t count) const {
  if (begin > samples_.size() || count > samples_.size() - begin)
    throw ShapeError("Dataset::slice out of range");
  return Dataset(std::vector<SampleId>(samples_.begin() + begin,
                                       samples_.begin() + begin + count));
}

std::vector<Dataset> Dataset::split(std::size_t parts) const {
  if (parts == 0) throw InvalidParameterError("Dataset::split: zero parts");
  const std::size_t each = samples_.size() / parts;
  std::vector<Dataset> out;
  out.reserve(parts);
  for (std::size_t i = 0; i < parts; ++i) out.push_back(slice(i * each, each));
  return out;
}

TruncGeom::TruncGeom(double p_in, int M_in) : p(p_in), M(M_in) {
  if (!(p > 0.0 && p < 1.0))
    throw InvalidParameterError("TruncGeom: p must lie in (0, 1)");
  if (M < 0 || M > 60) throw InvalidParameterError("TruncGeom: M out of range");
}

double TruncGeom::normalizer() const {
  double c = 0.0, pk = 1.0;
  for (int k = 0; k <= M; ++k, pk *= p) c += pk;
  return c;
}

double TruncGeom::probability(int k) const {
  if (k < 0 || k > M) return 0.0;
  return std::pow(p, k) / normalizer();
}

double TruncGeom::expected_inverse_power() const {
  return static_cast<double>(M + 1) / normalizer();
}

int sample_trunc_geom(const TruncGeom& tg, RngStream& rng) {
  const double u = rng.uniform() * tg.normalizer();
  double cdf = 0.0, pk = 1.0;
  for (int k = 0; k < tg.M; ++k, pk *= tg.p) {
    cdf += pk;
    if (u < cdf) return k;
  }
  return tg.M;
}

SaddleGradient batch_gradient(const PerSampleObjective& obj, const SimplexPoint& x,
                              const SimplexPoint& y, Batch batch) {
  if (batch.empty()) throw InvalidParameterError("batch_gradient: empty batch");
  if (x.dim() != obj.dim_x() || y.dim() != obj.dim_y())
    throw ShapeError("batch_gradient: dimension mismatch");
  return {obj.batch_grad_x(x.coords(), y.coords(), batch),
          -obj.batch_grad_y(x.coords(), y.coords(), batch)};
}

// plus  = average of all 2^(N+1) pairs
// minus = average of the first 2^N pairs
// g = C_M 2^N (grad(plus) - grad(minus)) + grad(first pair)
// At N = 0 and C_M = 1 the first pair is the minus point and g is grad(plus).
SaddleGradient bias_reduced_gradient(const PerSampleObjective& obj,
                                     const SimplexPoint& x, const SimplexPoint& y,
                                     int N, Batch batch, const TruncGeom& tg,
                                     RngStream& rng) {
  if (N < 0 || N > tg.M)
    throw InvalidParameterError("bias_reduced_gradient: N outside {0..M}");
  if (batch.empty())
    throw InvalidParameterError("bias_reduced_gradient: empty batch");
  if (x.dim() != obj.dim_x() || y.dim() != obj.dim_y())
    throw ShapeError("bias_reduced_gradient: dimension mismatch");

  const std::size_t half = std::size_t{1} << N;
  const VertexSampler sx(x), sy(y);
  VectorXd cx_first = VectorXd::Zero(x.dim()), cy_first = VectorXd::Zero(y.dim());
  VectorXd cx_rest = VectorXd::Zero(x.dim()), cy_rest = VectorXd::Zero(y.dim());
  Index first_x = 0, first_y = 0;
  for (std::size_t k = 0; k < 2 * half; ++k) {
    const Index i = sx(rng);
    const Index j = sy(rng);
    if (k == 0) {
      first_x = i;
      first_y = j;
    }
    if (k < half) {
      cx_first[i] += 1.0;
      cy_first[j] += 1.0;
    } else {
      cx_rest[i] += 1.0;
      cy_rest[j] += 1.0;
    }
  }
  const double h = static_cast<double>(half);
  const VectorXd x_minus = cx_first / h, y_minus = cy_first / h;
  const VectorXd x_plus = (cx_first + cx_rest) / (2.0 * h);
  const VectorXd y_plus = (cy_first + cy_rest) / (2.0 * h);
  VectorXd x_one = VectorXd::Zero(x.dim()), y_one = VectorXd::Zero(y.dim());
  x_one[first_x] = 1.0;
  y_one[first_y] = 1.0;

  const double w = tg.normalizer() * h;
  SaddleGradient g;
  g.g_x = w * (obj.batch_grad_x(x_plus, y_plus, batch) -
               obj.batch_grad_x(x_minus, y_minus, batch)) +
          obj.batch_grad_x(x_one, y_one, batch);
  g.g_y = -(w * (obj.batch_grad_y(x_plus, y_plus, batch) -
                 obj.batch_grad_y(x_minus, y_minus, batch)) +
            obj.batch_grad_y(x_one, y_one, batch));
  return g;
}

double ell_saddle(Index d_x, Index d_y) {
  return std::max(std::log(static_cast<double>(d_x)) +
                      std::log(static_cast<double>(d_y)),
                  std::log(2.0));
}

double ell_single(Index d) {
  return std::max(std::log(static_cast<double>(d)), std::log(2.0));
}

}  // namespace dpssp
