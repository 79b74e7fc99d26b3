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

#ifndef DPSSP_TESTS_TEST_UTIL_HPP_
#define DPSSP_TESTS_TEST_UTIL_HPP_

#include <cmath>
#include <cstdint>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "dpssp/oracles.hpp"

namespace dpssp::testing {

// Pearson chi-square p-value of observed counts against probabilities.
// Cells with zero expected mass must have zero counts.
inline double chi_square_pvalue(const std::vector<std::uint64_t>& counts,
                                const std::vector<double>& probs) {
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  double stat = 0.0;
  int cells = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double e = total * probs[i];
    if (e == 0.0) {
      if (counts[i] != 0) return 0.0;
      continue;
    }
    const double d = static_cast<double>(counts[i]) - e;
    stat += d * d / e;
    ++cells;
  }
  if (cells < 2) return 1.0;
  boost::math::chi_squared dist(cells - 1);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

// Central differences of a scalar function along a direction.
template <typename F>
double directional_fd(F f, const VectorXd& x, const VectorXd& dir, double h = 1e-6) {
  return (f(VectorXd(x + h * dir)) - f(VectorXd(x - h * dir))) / (2.0 * h);
}

// Direction with zero coordinate sum, so x +- h dir stays near the simplex.
inline VectorXd tangent_direction(Index d, RngStream& rng) {
  VectorXd v(d);
  for (Index i = 0; i < d; ++i) v[i] = rng.uniform() - 0.5;
  v.array() -= v.mean();
  return v;
}

}  // namespace dpssp::testing

#endif  // DPSSP_TESTS_TEST_UTIL_HPP_
