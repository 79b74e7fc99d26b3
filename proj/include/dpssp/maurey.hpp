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

#ifndef DPSSP_MAUREY_HPP_
#define DPSSP_MAUREY_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpssp/simplex.hpp"

namespace dpssp {

// Monte-Carlo checks of the sparsification bounds. Each suite fixes a test
// function with known constants, draws R independent sparsifications and
// compares the sample statistic with its bound plus 3 standard errors.
enum class MaureySuite {
  kValueBias,                  // E F(a) - F(x), quadratic
  kGradientBiasSecondOrder,    // ||E grad F(a) - grad F(x)||_inf, cubic
  kGradientBiasFirstOrder,     // same, log-sum-exp
  kValueTail,                  // P[|F(a) - F(x)| > threshold], log-sum-exp
  kMaxValueSecondMoment,       // E max_j |F_j(a) - F_j(x)|^2, quadratic forms
  kGradientSecondMomentSecondOrder,  // E ||grad F(a) - grad F(x)||_inf^2, cubic
  kGradientSecondMomentFirstOrder,   // same, log-sum-exp
};

const std::vector<MaureySuite>& all_maurey_suites();
std::string suite_name(MaureySuite s);
std::optional<MaureySuite> suite_from_name(const std::string& name);

inline constexpr std::size_t kMinSuiteReps = 10000;

struct SuiteReport {
  std::string name;
  bool pass = false;
  bool insufficient_reps = false;
  std::size_t reps = 0;
  double measured = 0.0;  // sample statistic (worst coordinate / level)
  double bound = 0.0;     // analytic right-hand side
  double mc_slack = 0.0;  // 3 standard errors added to the bound
  std::vector<std::pair<std::string, double>> details;
};

SuiteReport verify_maurey_suite(MaureySuite suite, std::size_t reps, std::uint64_t seed,
                                unsigned jobs = 1);

// Test functions. Constants are w.r.t. ||.||_1 on inputs and ||.||_inf on
// gradients, over the simplex.

// sum_j x_j^2: grad 2x, L1 = 2, L2 = 0.
double square_sum(const VectorXd& x);
// sum_j x_j^3: grad 3x^2 (L0 = 3), Hessian diag(6x) so L1 = 6; each partial
// 3x_j^2 has gradient 6x_j e_j, so L2 = 6.
double cube_sum(const VectorXd& x);
VectorXd cube_sum_grad(const VectorXd& x);
// ln sum_j exp(2 x_j): grad 2 softmax(2x) (L0 = 2); Hessian 4(diag(p) - pp^T)
// has entries bounded by 4 max(p(1-p), p_i p_j) <= 1, so L1 = 1.
double lse2(const VectorXd& x);
VectorXd lse2_grad(const VectorXd& x);

}  // namespace dpssp

#endif  // DPSSP_MAUREY_HPP_
