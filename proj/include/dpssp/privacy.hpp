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

#ifndef DPSSP_PRIVACY_HPP_
#define DPSSP_PRIVACY_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "dpssp/oracles.hpp"
#include "dpssp/rng.hpp"

namespace dpssp {

// Relative slack used when a precondition is re-checked from realized counts.
inline constexpr double kBudgetRelTol = 1e-12;

enum class Mode { kFirstOrder, kSecondOrder, kQuadratic };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& s);  // throws ConfigError

// (epsilon, delta) with 0 < delta < 1 and 0 < epsilon < 8 ln(1/delta).
class PrivacyParams {
 public:
  PrivacyParams(double epsilon, double delta);  // throws BudgetError

  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }
  double log_inv_delta() const;

 private:
  double epsilon_;
  double delta_;
};

// Throws BudgetError unless the pair satisfies the PrivacyParams invariants.
void validate_privacy(double epsilon, double delta);

// Plan for vertex-sampled stochastic mirror descent.
struct SsmdPlan {
  std::int64_t T = 1;
  double tau = 0.0;
  std::int64_t K = 1;
  std::int64_t batch = 1;
  Mode mode = Mode::kQuadratic;
};

// Plan for the bias-reduced variant.
struct BrPlan {
  double U = 0.0;
  int M = 0;
  double alpha = 0.0;
  double tau = 0.0;
  double C = 0.0;
};

// Plan for the DP-SCO solver.
struct ScoPlan {
  std::int64_t T = 1;
  double tau = 0.0;
  std::int64_t K = 1;
  std::int64_t q = 1;
  std::int64_t batch = 1;
  Mode mode = Mode::kSecondOrder;
};

// tau_max = B eps / (16 L0 sqrt(T (K+1) ln(1/delta))).
double max_step_alg1(double B_batch, double eps, double delta, double L0,
                     double T, double K);
// tau_max = B eps / (8 L0 sqrt(2 (T K / q + q K) ln(1/delta))).
double max_step_alg5(double B_batch, double eps, double delta, double L0,
                     double T, double K, double q);
// U_max = eps^2 / (48 ln(1/delta) (9 tau alpha L0)^2).
double max_U_alg3(double eps, double delta, double tau, double alpha, double L0);
// Per-mechanism budget eps / (2 sqrt(2 T ln(1/delta))) for T pure-DP steps.
double advanced_composition_eps(double T, double eps, double delta);

// sqrt(2 ln(1/delta') sum eps_m^2) + sum eps_m^2 / 2 <= eps.
bool adaptive_budget_ok(std::span<const double> eps_list, double eps,
                        double delta_prime);
// Same test for `count` mechanisms that each spend eps_each.
bool adaptive_budget_ok(double count, double eps_each, double eps,
                        double delta_prime);

// Samples i with probability proportional to exp(eps s_i / (2 sensitivity))
// by Gumbel-argmax.
Index exp_mech_sample(const VectorXd& scores, double sensitivity, double eps,
                      RngStream& rng);

// L0^2 + L2^2 + ell M L1^2, the C entering the bias-reduced step size.
double bias_reduced_constant(const Constants& c, double ell, int M);

SsmdPlan plan_alg1(std::size_t n, const PrivacyParams& privacy,
                   const Constants& c, double ell, Mode mode);
BrPlan plan_alg3(std::size_t n, const PrivacyParams& privacy, const Constants& c,
                 double ell);
ScoPlan plan_alg5(std::size_t n, const PrivacyParams& privacy, const Constants& c,
                  double ell_x, Mode mode);

// Invariant checks. Each throws BudgetError naming the violated condition.
void check_plan(const SsmdPlan& plan, std::size_t n, const PrivacyParams& privacy,
                const Constants& c);
void check_plan(const BrPlan& plan, std::size_t n, const PrivacyParams& privacy,
                const Constants& c);
void check_plan(const ScoPlan& plan, std::size_t n, const PrivacyParams& privacy,
                const Constants& c);

// a <= b up to kBudgetRelTol.
inline bool leq_tol(double a, double b) {
  return a <= b + kBudgetRelTol * (b < 0 ? -b : b);
}

}  // namespace dpssp

#endif  // DPSSP_PRIVACY_HPP_
