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

#ifndef DPSSP_EVALUATION_HPP_
#define DPSSP_EVALUATION_HPP_

#include <cstdint>
#include <string>

#include "dpssp/oracles.hpp"

namespace dpssp {

enum class GapMethod { kExactBilinear, kExactBiaffine, kInnerMirror };

std::string to_string(GapMethod m);

struct GapReport {
  double gap_estimate = 0.0;
  double inner_error_bound = 0.0;
  GapMethod method = GapMethod::kExactBilinear;
};

// max_j (A^T x)_j - min_i (A y)_i for F(x, y) = x^T A y.
GapReport exact_gap_bilinear(const MatrixXd& A, const SimplexPoint& x,
                             const SimplexPoint& y);

// Vertex enumeration on the population objective; needs obj.is_biaffine().
GapReport exact_gap_biaffine(const PerSampleObjective& obj, const SimplexPoint& x,
                             const SimplexPoint& y);

// Inner entropic mirror ascent on y (and descent on x) for inner_T steps on
// the population objective. The estimate can undershoot the true gap by at
// most inner_error_bound = 2 L0 sqrt(ell / inner_T).
GapReport gap_general(const PerSampleObjective& obj, const SimplexPoint& x,
                      const SimplexPoint& y, std::int64_t inner_T);

// Best available gap: closed form for bilinear objectives, vertex
// enumeration for biaffine ones, inner mirror steps otherwise.
GapReport evaluate_gap(const PerSampleObjective& obj, const SimplexPoint& x,
                       const SimplexPoint& y, std::int64_t inner_T);

// lambda * LSE(A^T x / lambda): an upper bound on max_j (A^T x)_j that is
// within lambda ln(d_y) of it.
double smoothed_max(const MatrixXd& A, const VectorXd& x, double lambda);

struct NashResult {
  double value = 0.0;
  SimplexPoint x;
  SimplexPoint y;
  double certified_gap = 0.0;
  std::int64_t iterations = 0;
};

// Game value by entropic mirror-prox self-play, stopping once the exact gap
// of the averaged pair is at most target_gap. Throws OracleError if that
// does not happen within max_iterations.
NashResult nash_value_bruteforce(const MatrixXd& A, std::int64_t max_iterations = 1000000,
                                 double target_gap = 1e-3);

}  // namespace dpssp

#endif  // DPSSP_EVALUATION_HPP_
