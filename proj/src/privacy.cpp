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

#include "dpssp/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dpssp {
namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw InvalidParameterError(std::string(what) + " must be positive and finite");
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::int64_t ceil_i64(double v) {
  if (!std::isfinite(v) || v > 9e18) throw NumericError("planner: overflow");
  return static_cast<std::int64_t>(std::ceil(v));
}

std::int64_t round_i64(double v) {
  if (!std::isfinite(v) || v > 9e18) throw NumericError("planner: overflow");
  return static_cast<std::int64_t>(std::llround(v));
}

}  // namespace

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::kFirstOrder: return "first_order";
    case Mode::kSecondOrder: return "second_order";
    case Mode::kQuadratic: return "quadratic";
  }
  return "unknown";
}

Mode mode_from_string(const std::string& s) {
  if (s == "first_order") return Mode::kFirstOrder;
  if (s == "second_order") return Mode::kSecondOrder;
  if (s == "quadratic") return Mode::kQuadratic;
  throw ConfigError("unknown mode '" + s + "'");
}

void validate_privacy(double epsilon, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw BudgetError("delta must lie in (0, 1), got " + fmt(delta));
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw BudgetError("epsilon must be positive, got " + fmt(epsilon));
  const double cap = 8.0 * std::log(1.0 / delta);
  if (!(epsilon < cap))
    throw BudgetError("epsilon must be below 8 ln(1/delta) = " + fmt(cap) +
                      ", got " + fmt(epsilon));
}

PrivacyParams::PrivacyParams(double epsilon, double delta)
    : epsilon_(epsilon), delta_(delta) {
  validate_privacy(epsilon, delta);
}

double PrivacyParams::log_inv_delta() const { return std::log(1.0 / delta_); }

double max_step_alg1(double B_batch, double eps, double delta, double L0,
                     double T, double K) {
  validate_privacy(eps, delta);
  require_positive(B_batch, "B_batch");
  require_positive(L0, "L0");
  require_positive(T, "T");
  require_positive(K, "K");
  return B_batch * eps /
         (16.0 * L0 * std::sqrt(T * (K + 1.0) * std::log(1.0 / delta)));
}

double max_step_alg5(double B_batch, double eps, double delta, double L0,
                     double T, double K, double q) {
  validate_privacy(eps, delta);
  require_positive(B_batch, "B_batch");
  require_positive(L0, "L0");
  require_positive(T, "T");
  require_positive(K, "K");
  require_positive(q, "q");
  return B_batch * eps /
         (8.0 * L0 * std::sqrt(2.0 * (T * K / q + q * K) * std::log(1.0 / delta)));
}

double max_U_alg3(double eps, double delta, double tau, double alpha, double L0) {
  validate_privacy(eps, delta);
  require_positive(tau, "tau");
  require_positive(alpha, "alpha");
  require_positive(L0, "L0");
  const double s = 9.0 * tau * alpha * L0;
  return eps * eps / (48.0 * std::log(1.0 / delta) * s * s);
}

double advanced_composition_eps(double T, double eps, double delta) {
  validate_privacy(eps, delta);
  if (!(T >= 1.0)) throw InvalidParameterError("T must be at least 1");
  return eps / (2.0 * std::sqrt(2.0 * T * std::log(1.0 / delta)));
}

bool adaptive_budget_ok(std::span<const double> eps_list, double eps,
                        double delta_prime) {
  double sq = 0.0;
  for (double e : eps_list) {
    if (!(e >= 0.0)) throw InvalidParameterError("negative mechanism epsilon");
    sq += e * e;
  }
  return leq_tol(std::sqrt(2.0 * std::log(1.0 / delta_prime) * sq) + 0.5 * sq, eps);
}

bool adaptive_budget_ok(double count, double eps_each, double eps,
                        double delta_prime) {
  if (!(count >= 0.0) || !(eps_each >= 0.0))
    throw InvalidParameterError("negative mechanism count or epsilon");
  const double sq = count * eps_each * eps_each;
  return leq_tol(std::sqrt(2.0 * std::log(1.0 / delta_prime) * sq) + 0.5 * sq, eps);
}

Index exp_mech_sample(const VectorXd& scores, double sensitivity, double eps,
                      RngStream& rng) {
  if (scores.size() == 0) throw ShapeError("exp_mech_sample: no candidates");
  if (!scores.allFinite()) throw NumericError("exp_mech_sample: non-finite score");
  require_positive(sensitivity, "sensitivity");
  require_positive(eps, "eps");
  const double scale = eps / (2.0 * sensitivity);
  Index best = 0;
  double best_key = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < scores.size(); ++i) {
    const double key = scale * scores[i] + rng.gumbel();
    if (key > best_key) {
      best_key = key;
      best = i;
    }
  }
  return best;
}

SsmdPlan plan_alg1(std::size_t n, const PrivacyParams& privacy,
                   const Constants& c, double ell, Mode mode) {
  if (n < 1) throw InvalidParameterError("plan_alg1: n must be at least 1");
  require_positive(c.L0, "L0");
  require_positive(ell, "ell");
  const double eps = privacy.epsilon();
  const double ln = privacy.log_inv_delta();
  const double ne = static_cast<double>(n) * eps;
  const auto nn = static_cast<std::int64_t>(n);

  SsmdPlan plan;
  plan.mode = mode;
  if (mode == Mode::kFirstOrder) {
    plan.T = std::min(nn, ceil_i64(std::pow(ne, 2.0 / 3.0) / std::cbrt(ln)));
    plan.T = std::max<std::int64_t>(plan.T, 1);
    plan.K = std::max<std::int64_t>(1, ceil_i64(plan.T / ell));
  } else {
    plan.T = std::min(nn, ceil_i64(std::pow(ne, 0.8) /
                                   (std::pow(ell, 0.2) * std::pow(ln, 0.4))));
    plan.T = std::max<std::int64_t>(plan.T, 1);
    plan.K = mode == Mode::kSecondOrder
                 ? std::max<std::int64_t>(1, ceil_i64(std::sqrt(plan.T / ell)))
                 : 1;
  }
  plan.batch = std::max<std::int64_t>(1, nn / plan.T);
  plan.tau = std::min(std::sqrt(ell / static_cast<double>(plan.T)) / c.L0,
                      max_step_alg1(static_cast<double>(plan.batch), eps,
                                    privacy.delta(), c.L0,
                                    static_cast<double>(plan.T),
                                    static_cast<double>(plan.K)));
  check_plan(plan, n, privacy, c);
  return plan;
}

double bias_reduced_constant(const Constants& c, double ell, int M) {
  return c.L0 * c.L0 + c.L2 * c.L2 + ell * M * c.L1 * c.L1;
}

namespace {

double alg3_U_real(std::size_t n, double eps, double ln, double C, double L0,
                   double ell) {
  const double nd = static_cast<double>(n);
  const double u = nd * eps * std::sqrt(C) /
                   (std::sqrt(4.0 * 48.0 * 81.0 * ell * ln) * L0);
  return std::min(u, nd / 2.0);
}

int alg3_level(double U) {
  return std::max(0, static_cast<int>(std::lround(std::log2(std::sqrt(U)))));
}

bool alg3_fits(const BrPlan& p, std::size_t n, const PrivacyParams& pr, double L0) {
  const double nd = static_cast<double>(n);
  return p.U <= max_U_alg3(pr.epsilon(), pr.delta(), p.tau, p.alpha, L0) &&
         p.U <= nd * p.alpha / 2.0 && p.U <= nd / 2.0;
}

}  // namespace

BrPlan plan_alg3(std::size_t n, const PrivacyParams& privacy, const Constants& c,
                 double ell) {
  if (n < 8) throw BudgetError("plan_alg3: n must be at least 8");
  require_positive(c.L0, "L0");
  require_positive(ell, "ell");
  const double eps = privacy.epsilon();
  const double ln = privacy.log_inv_delta();

  // M enters C linearly and U only through sqrt(C), so this settles fast.
  int M = alg3_level(static_cast<double>(n) / 2.0);
  bool settled = false;
  for (int iter = 0; iter < 10; ++iter) {
    const double U = alg3_U_real(n, eps, ln, bias_reduced_constant(c, ell, M), c.L0, ell);
    const int next = alg3_level(U);
    if (next == M) {
      settled = true;
      break;
    }
    M = next;
  }
  if (!settled) throw NumericError("plan_alg3: M/U fixed point did not settle");

  BrPlan plan;
  for (int round = 0; round < 16; ++round) {
    plan.M = M;
    plan.C = bias_reduced_constant(c, ell, M);
    plan.U = std::floor(alg3_U_real(n, eps, ln, plan.C, c.L0, ell));
    for (;;) {
      if (plan.U < 4.0)
        throw BudgetError("plan_alg3: stopping parameter U = " + fmt(plan.U) +
                          " is below 4 at n = " + std::to_string(n));
      plan.tau = std::sqrt(ell / (plan.C * plan.U));
      const double tl = plan.tau * c.L0;
      plan.alpha = std::cbrt(2.0 * eps * eps /
                             (48.0 * 81.0 * ln * tl * tl * static_cast<double>(n)));
      if (alg3_fits(plan, n, privacy, c.L0)) break;
      plan.U -= 1.0;
    }
    const int next = alg3_level(plan.U);
    if (next == M) break;
    M = next;
  }
  check_plan(plan, n, privacy, c);
  return plan;
}

ScoPlan plan_alg5(std::size_t n, const PrivacyParams& privacy, const Constants& c,
                  double ell_x, Mode mode) {
  if (n < 1) throw InvalidParameterError("plan_alg5: n must be at least 1");
  if (mode == Mode::kQuadratic)
    throw ConfigError("plan_alg5: mode must be first_order or second_order");
  require_positive(c.L0, "L0");
  require_positive(ell_x, "ell_x");
  const double eps = privacy.epsilon();
  const double ln = privacy.log_inv_delta();
  const double nd = static_cast<double>(n);
  const auto nn = static_cast<std::int64_t>(n);

  ScoPlan plan;
  plan.mode = mode;
  if (mode == Mode::kSecondOrder) {
    plan.T = std::max<std::int64_t>(
        1, std::min(nn, ceil_i64(nd * eps / (ell_x * std::sqrt(ln)))));
    const double T = static_cast<double>(plan.T);
    plan.q = std::max<std::int64_t>(1, round_i64(std::sqrt(T / ell_x)));
    plan.q = std::min(plan.q, plan.T);
    plan.K = std::max<std::int64_t>(1, round_i64(T / static_cast<double>(plan.q)));
  } else {
    plan.T = std::max<std::int64_t>(
        1, std::min(nn, ceil_i64(std::pow(nd * eps, 0.8) /
                                 std::pow(ell_x * ln, 0.4))));
    const double T = static_cast<double>(plan.T);
    plan.q = std::max<std::int64_t>(1, round_i64(std::sqrt(T) / ell_x));
    plan.q = std::min(plan.q, plan.T);
    plan.K = std::max<std::int64_t>(1, round_i64(T / ell_x));
  }
  plan.batch = std::max<std::int64_t>(1, nn / plan.T);

  const double T = static_cast<double>(plan.T);
  const double q = static_cast<double>(plan.q);
  const double K = static_cast<double>(plan.K);
  const double L0s = c.L0 * c.L0, L1s = c.L1 * c.L1, L2s = c.L2 * c.L2;
  double denom;
  if (mode == Mode::kSecondOrder) {
    denom = L0s + L1s * q * ell_x / K + L2s * q / (K * K);
  } else {
    denom = L0s + (L0s + L1s) * q * std::sqrt(ell_x / K) +
            L1s * q / (std::sqrt(ell_x) * std::pow(K, 1.5));
  }
  const double tau_opt = std::sqrt(ell_x / (denom * T));
  const double tau_psi = 1.0 / (4.0 * c.L0 * q);
  const double tau_priv = max_step_alg5(static_cast<double>(plan.batch), eps,
                                        privacy.delta(), c.L0, T, K, q);
  plan.tau = std::min({tau_opt, tau_psi, tau_priv});
  check_plan(plan, n, privacy, c);
  return plan;
}

void check_plan(const SsmdPlan& p, std::size_t n, const PrivacyParams& pr,
                const Constants& c) {
  if (p.T < 1 || p.K < 1 || p.batch < 1)
    throw BudgetError("SsmdPlan: T, K and batch must be at least 1");
  if (!(p.tau > 0.0) || !std::isfinite(p.tau))
    throw BudgetError("SsmdPlan: tau must be positive");
  if (static_cast<double>(p.T) * static_cast<double>(p.batch) >
      static_cast<double>(n))
    throw BudgetError("SsmdPlan: T * batch = " + std::to_string(p.T * p.batch) +
                      " exceeds n = " + std::to_string(n));
  const double cap = max_step_alg1(static_cast<double>(p.batch), pr.epsilon(),
                                   pr.delta(), c.L0, static_cast<double>(p.T),
                                   static_cast<double>(p.K));
  if (!leq_tol(p.tau, cap))
    throw BudgetError("SsmdPlan: tau = " + fmt(p.tau) +
                      " exceeds the private step bound " + fmt(cap));
}

void check_plan(const BrPlan& p, std::size_t n, const PrivacyParams& pr,
                const Constants& c) {
  if (!(p.tau > 0.0) || !(p.alpha > 0.0) || !std::isfinite(p.tau) ||
      !std::isfinite(p.alpha))
    throw BudgetError("BrPlan: tau and alpha must be positive");
  if (!(p.U >= 1.0)) throw BudgetError("BrPlan: U must be at least 1");
  if (p.M < 0 || p.M > 40) throw BudgetError("BrPlan: M out of range");
  const double nd = static_cast<double>(n);
  const double umax = max_U_alg3(pr.epsilon(), pr.delta(), p.tau, p.alpha, c.L0);
  if (!leq_tol(p.U, umax))
    throw BudgetError("BrPlan: U = " + fmt(p.U) + " exceeds the private bound " +
                      fmt(umax));
  if (!leq_tol(p.U, nd * p.alpha / 2.0) || !leq_tol(p.U, nd / 2.0))
    throw BudgetError("BrPlan: U = " + fmt(p.U) +
                      " exceeds the sample bound min(n alpha / 2, n / 2)");
  if (std::ldexp(1.0, p.M) > p.U)
    throw BudgetError("BrPlan: 2^M exceeds U, no step could run");
}

void check_plan(const ScoPlan& p, std::size_t n, const PrivacyParams& pr,
                const Constants& c) {
  if (p.T < 1 || p.K < 1 || p.q < 1 || p.batch < 1)
    throw BudgetError("ScoPlan: T, K, q and batch must be at least 1");
  if (p.q > p.T) throw BudgetError("ScoPlan: q must not exceed T");
  if (!(p.tau > 0.0) || !std::isfinite(p.tau))
    throw BudgetError("ScoPlan: tau must be positive");
  if (static_cast<double>(p.T) * static_cast<double>(p.batch) >
      static_cast<double>(n))
    throw BudgetError("ScoPlan: T * batch exceeds n = " + std::to_string(n));
  const double cap = max_step_alg5(
      static_cast<double>(p.batch), pr.epsilon(), pr.delta(), c.L0,
      static_cast<double>(p.T), static_cast<double>(p.K), static_cast<double>(p.q));
  if (!leq_tol(p.tau, cap))
    throw BudgetError("ScoPlan: tau = " + fmt(p.tau) +
                      " exceeds the private step bound " + fmt(cap));
  const double psi = 1.0 / (4.0 * c.L0 * static_cast<double>(p.q));
  if (!leq_tol(p.tau, psi))
    throw BudgetError("ScoPlan: tau = " + fmt(p.tau) + " exceeds 1/(4 L0 q) = " +
                      fmt(psi));
}

}  // namespace dpssp
