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

#ifndef DPSSP_ORACLES_HPP_
#define DPSSP_ORACLES_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dpssp/simplex.hpp"

namespace dpssp {

// Samples are opaque identifiers; each objective decides what they mean
// (a noise sign, a category index, ...).
using SampleId = std::size_t;
using Batch = std::span<const SampleId>;

struct Constants {
  double L0 = 0.0;  // ||grad||_inf bound
  double L1 = 0.0;  // l1 -> l_inf gradient Lipschitz constant
  double L2 = 0.0;  // smoothness of the partial gradients
  double B = 0.0;   // |value| bound
};

// f(x, y; z), convex in x and concave in y. Implementations must be safe for
// concurrent const calls.
class PerSampleObjective {
 public:
  virtual ~PerSampleObjective() = default;

  virtual Index dim_x() const = 0;
  virtual Index dim_y() const = 0;
  virtual Constants constants() const = 0;

  virtual double value(const VectorXd& x, const VectorXd& y, SampleId z) const = 0;
  virtual VectorXd grad_x(const VectorXd& x, const VectorXd& y, SampleId z) const = 0;
  virtual VectorXd grad_y(const VectorXd& x, const VectorXd& y, SampleId z) const = 0;

  // Batch means. The defaults loop over the batch.
  virtual double batch_value(const VectorXd& x, const VectorXd& y, Batch batch) const;
  virtual VectorXd batch_grad_x(const VectorXd& x, const VectorXd& y, Batch batch) const;
  virtual VectorXd batch_grad_y(const VectorXd& x, const VectorXd& y, Batch batch) const;

  // Expectation over the data distribution. Throws OracleError unless the
  // objective knows its population.
  virtual bool has_population() const { return false; }
  virtual double population_value(const VectorXd& x, const VectorXd& y) const;
  virtual VectorXd population_grad_x(const VectorXd& x, const VectorXd& y) const;
  virtual VectorXd population_grad_y(const VectorXd& x, const VectorXd& y) const;

  // Population payoff matrix (d_x by d_y) when the objective is bilinear,
  // F(x, y) = x^T A y.
  virtual std::optional<MatrixXd> bilinear_payoff() const { return std::nullopt; }

  // True when the population objective is affine in x for fixed y and affine
  // in y for fixed x; inner max/min are then attained at vertices.
  virtual bool is_biaffine() const { return false; }
};

// f(x; z) on a single simplex.
class ConvexObjective {
 public:
  virtual ~ConvexObjective() = default;

  virtual Index dim() const = 0;
  virtual Constants constants() const = 0;
  virtual double value(const VectorXd& x, SampleId z) const = 0;
  virtual VectorXd grad(const VectorXd& x, SampleId z) const = 0;

  virtual double batch_value(const VectorXd& x, Batch batch) const;
  virtual VectorXd batch_grad(const VectorXd& x, Batch batch) const;

  virtual bool has_population() const { return false; }
  virtual double population_value(const VectorXd& x) const;
  virtual VectorXd population_grad(const VectorXd& x) const;
};

// An ordered sample list with a consumption cursor. Solvers draw fresh
// batches from the front; the cursor never passes the end.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<SampleId> samples) : samples_(std::move(samples)) {}

  std::size_t size() const { return samples_.size(); }
  std::size_t cursor() const { return cursor_; }
  std::size_t remaining() const { return samples_.size() - cursor_; }
  const std::vector<SampleId>& samples() const { return samples_; }
  Batch all() const { return Batch(samples_); }

  // Next `count` unconsumed samples. Throws DatasetError past the end.
  Batch take(std::size_t count);

  // Contiguous sub-dataset [begin, begin + count) with a fresh cursor.
  Dataset slice(std::size_t begin, std::size_t count) const;
  // `parts` equal contiguous shards; the remainder is dropped.
  std::vector<Dataset> split(std::size_t parts) const;

 private:
  std::vector<SampleId> samples_;
  std::size_t cursor_ = 0;
};

// Truncated geometric on {0..M} with mass p^k / C_M, C_M = sum_k p^k.
struct TruncGeom {
  double p = 0.5;
  int M = 0;

  TruncGeom() = default;
  TruncGeom(double p_in, int M_in);

  double normalizer() const;
  double probability(int k) const;
  // E[(1/p)^N] = (M+1)/C_M; for p = 1/2 this is E[2^N].
  double expected_inverse_power() const;
};

int sample_trunc_geom(const TruncGeom& tg, RngStream& rng);

// Saddle operator value (grad_x f, -grad_y f).
struct SaddleGradient {
  VectorXd g_x;
  VectorXd g_y;
};

SaddleGradient batch_gradient(const PerSampleObjective& obj, const SimplexPoint& x,
                              const SimplexPoint& y, Batch batch);

// Multilevel estimator built from 2^(N+1) vertex pairs; see the .cpp for the
// exact combination.
SaddleGradient bias_reduced_gradient(const PerSampleObjective& obj,
                                     const SimplexPoint& x, const SimplexPoint& y,
                                     int N, Batch batch, const TruncGeom& tg,
                                     RngStream& rng);

// Number of vertex draws bias_reduced_gradient makes for level N.
inline std::size_t bias_reduced_vertex_draws(int N) {
  return std::size_t{4} << N;
}

// ln(d_x) + ln(d_y), floored at ln 2 so one-dimensional blocks still give a
// usable step size.
double ell_saddle(Index d_x, Index d_y);
// ln(d), floored at ln 2.
double ell_single(Index d);

}  // namespace dpssp

#endif  // DPSSP_ORACLES_HPP_
