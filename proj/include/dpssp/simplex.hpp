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

#ifndef DPSSP_SIMPLEX_HPP_
#define DPSSP_SIMPLEX_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dpssp/error.hpp"
#include "dpssp/rng.hpp"

namespace dpssp {

using Eigen::ArrayXd;
using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

inline constexpr double kSimplexTolerance = 1e-9;

template <typename Scalar>
bool is_simplex(const VectorX<Scalar>& v,
                Scalar tol = Scalar(kSimplexTolerance)) {
  if (v.size() < 1 || !v.allFinite()) return false;
  if ((v.array() < Scalar(0)).any()) return false;
  using std::abs;
  return abs(v.sum() - Scalar(1)) <= tol;
}

// A probability vector. Construction validates; every instance in the
// program satisfies the simplex invariants.
template <typename Scalar>
class BasicSimplexPoint {
 public:
  using Vector = VectorX<Scalar>;

  // The one-point simplex; a placeholder until assigned.
  BasicSimplexPoint() : coords_(Vector::Ones(1)) {}
  explicit BasicSimplexPoint(Vector coords) : coords_(std::move(coords)) {
    if (coords_.size() < 1)
      throw ShapeError("SimplexPoint: dimension must be at least 1");
    if (!coords_.allFinite())
      throw NumericError("SimplexPoint: non-finite coordinate");
    if (!is_simplex<Scalar>(coords_))
      throw InvalidParameterError(
          "SimplexPoint: coordinates must be nonnegative and sum to 1");
  }

  static BasicSimplexPoint uniform(Index d) {
    if (d < 1) throw ShapeError("SimplexPoint: dimension must be at least 1");
    return BasicSimplexPoint(Vector::Constant(d, Scalar(1) / Scalar(d)));
  }

  static BasicSimplexPoint vertex(Index d, Index i) {
    if (d < 1 || i < 0 || i >= d)
      throw ShapeError("SimplexPoint: vertex index out of range");
    Vector v = Vector::Zero(d);
    v[i] = Scalar(1);
    return BasicSimplexPoint(std::move(v));
  }

  Index dim() const { return coords_.size(); }
  const Vector& coords() const { return coords_; }
  Scalar operator[](Index i) const { return coords_[i]; }

 private:
  Vector coords_;
};

// Unnormalized log-domain weights of a multiplicative-weights iterate.
template <typename Scalar>
class BasicLogWeights {
 public:
  using Vector = VectorX<Scalar>;

  explicit BasicLogWeights(Vector logw) : logw_(std::move(logw)) {
    if (logw_.size() < 1)
      throw ShapeError("LogWeights: dimension must be at least 1");
    if (!logw_.allFinite())
      throw NumericError("LogWeights: non-finite entry");
  }

  static BasicLogWeights uniform(Index d) {
    if (d < 1) throw ShapeError("LogWeights: dimension must be at least 1");
    return BasicLogWeights(Vector::Zero(d));
  }

  Index dim() const { return logw_.size(); }
  const Vector& logw() const { return logw_; }

 private:
  Vector logw_;
};

using SimplexPoint = BasicSimplexPoint<double>;
using LogWeights = BasicLogWeights<double>;

// Softmax with a max shift, so entries spanning +-1e4 are fine.
template <typename Scalar>
BasicSimplexPoint<Scalar> to_point(const BasicLogWeights<Scalar>& w) {
  const auto& lw = w.logw();
  VectorX<Scalar> p = (lw.array() - lw.maxCoeff()).exp().matrix();
  p /= p.sum();
  return BasicSimplexPoint<Scalar>(std::move(p));
}

// logw' = logw + step. Repeated calls add up exactly like one cumulative step.
template <typename Scalar, typename Derived>
BasicLogWeights<Scalar> log_step(const BasicLogWeights<Scalar>& w,
                                 const Eigen::MatrixBase<Derived>& step) {
  if (step.size() != w.dim()) throw ShapeError("log_step: dimension mismatch");
  if (!step.allFinite()) throw NumericError("log_step: non-finite step");
  VectorX<Scalar> next = w.logw() + step.template cast<Scalar>();
  if (!next.allFinite()) throw NumericError("log_step: overflow");
  return BasicLogWeights<Scalar>(std::move(next));
}

// Entropic mirror step against the operator value g: logw' = logw - tau*g.
// With the saddle operator (grad_x f, -grad_y f) the same call makes x
// descend and y ascend.
template <typename Scalar, typename Derived>
BasicLogWeights<Scalar> mwu_step(const BasicLogWeights<Scalar>& w,
                                 const Eigen::MatrixBase<Derived>& g,
                                 Scalar tau) {
  if (!(tau > Scalar(0)) || !std::isfinite(static_cast<double>(tau)))
    throw InvalidParameterError("mwu_step: tau must be positive and finite");
  if (!g.allFinite()) throw NumericError("mwu_step: non-finite gradient");
  return log_step(w, (-tau * g.template cast<Scalar>()).eval());
}

// Inverse CDF with one uniform: the lowest i with u < cdf_i.
template <typename Scalar>
Index sample_vertex(const BasicSimplexPoint<Scalar>& x, RngStream& rng) {
  const double u = rng.uniform();
  const auto& c = x.coords();
  double cdf = 0.0;
  Index last_positive = 0;
  for (Index i = 0; i < c.size(); ++i) {
    const double ci = static_cast<double>(c[i]);
    if (ci > 0.0) last_positive = i;
    cdf += ci;
    if (u < cdf) return i;
  }
  // Rounding left the total CDF a hair below u.
  return last_positive;
}

// Same distribution and the same draw-for-draw output as sample_vertex, with
// the cumulative sum computed once and binary search per draw.
class VertexSampler {
 public:
  template <typename Scalar>
  explicit VertexSampler(const BasicSimplexPoint<Scalar>& x) {
    const auto& c = x.coords();
    cdf_.resize(static_cast<std::size_t>(c.size()));
    double acc = 0.0;
    for (Index i = 0; i < c.size(); ++i) {
      const double ci = static_cast<double>(c[i]);
      if (ci > 0.0) last_positive_ = i;
      acc += ci;
      cdf_[static_cast<std::size_t>(i)] = acc;
    }
  }

  Index operator()(RngStream& rng) const {
    const double u = rng.uniform();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) return last_positive_;
    return static_cast<Index>(it - cdf_.begin());
  }

  Index dim() const { return static_cast<Index>(cdf_.size()); }

 private:
  std::vector<double> cdf_;
  Index last_positive_ = 0;
};

// Average of K iid one-hot draws from P_x.
template <typename Scalar>
BasicSimplexPoint<Scalar> sparsify(const BasicSimplexPoint<Scalar>& x,
                                   std::int64_t K, RngStream& rng) {
  if (K < 1) throw InvalidParameterError("sparsify: K must be at least 1");
  const VertexSampler sampler(x);
  VectorX<Scalar> counts = VectorX<Scalar>::Zero(x.dim());
  for (std::int64_t k = 0; k < K; ++k) counts[sampler(rng)] += Scalar(1);
  counts /= Scalar(K);
  return BasicSimplexPoint<Scalar>(std::move(counts));
}

// ((t-1) w_prev + x_t) / t.
template <typename Scalar>
BasicSimplexPoint<Scalar> running_average(const BasicSimplexPoint<Scalar>& w_prev,
                                          const BasicSimplexPoint<Scalar>& x_t,
                                          std::int64_t t) {
  if (t < 1) throw InvalidParameterError("running_average: t must be >= 1");
  if (w_prev.dim() != x_t.dim())
    throw ShapeError("running_average: dimension mismatch");
  if (t == 1) return x_t;
  const Scalar tt = Scalar(t);
  VectorX<Scalar> w = ((tt - Scalar(1)) * w_prev.coords() + x_t.coords()) / tt;
  return BasicSimplexPoint<Scalar>(std::move(w));
}

}  // namespace dpssp

#endif  // DPSSP_SIMPLEX_HPP_
