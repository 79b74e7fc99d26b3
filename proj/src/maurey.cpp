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

#include "dpssp/maurey.hpp"

#include <cmath>
#include <functional>

#include "dpssp/parallel.hpp"
#include "dpssp/problems.hpp"

namespace dpssp {

double square_sum(const VectorXd& x) { return x.squaredNorm(); }
double cube_sum(const VectorXd& x) { return x.array().cube().sum(); }
VectorXd cube_sum_grad(const VectorXd& x) { return 3.0 * x.array().square().matrix(); }

double lse2(const VectorXd& x) {
  const double m = 2.0 * x.maxCoeff();
  return m + std::log((2.0 * x.array() - m).exp().sum());
}

VectorXd lse2_grad(const VectorXd& x) {
  VectorXd p = (2.0 * x.array() - 2.0 * x.maxCoeff()).exp().matrix();
  return 2.0 * p / p.sum();
}

const std::vector<MaureySuite>& all_maurey_suites() {
  static const std::vector<MaureySuite> all = {
      MaureySuite::kValueBias,
      MaureySuite::kGradientBiasSecondOrder,
      MaureySuite::kGradientBiasFirstOrder,
      MaureySuite::kValueTail,
      MaureySuite::kMaxValueSecondMoment,
      MaureySuite::kGradientSecondMomentSecondOrder,
      MaureySuite::kGradientSecondMomentFirstOrder,
  };
  return all;
}

std::string suite_name(MaureySuite s) {
  switch (s) {
    case MaureySuite::kValueBias: return "value_bias";
    case MaureySuite::kGradientBiasSecondOrder: return "gradient_bias_second_order";
    case MaureySuite::kGradientBiasFirstOrder: return "gradient_bias_first_order";
    case MaureySuite::kValueTail: return "value_tail";
    case MaureySuite::kMaxValueSecondMoment: return "max_value_second_moment";
    case MaureySuite::kGradientSecondMomentSecondOrder:
      return "gradient_second_moment_second_order";
    case MaureySuite::kGradientSecondMomentFirstOrder:
      return "gradient_second_moment_first_order";
  }
  return "unknown";
}

std::optional<MaureySuite> suite_from_name(const std::string& name) {
  for (MaureySuite s : all_maurey_suites())
    if (suite_name(s) == name) return s;
  return std::nullopt;
}

namespace {

constexpr std::size_t kChunks = 64;

// Running sums of a fixed-width vector statistic.
struct Moments {
  VectorXd sum, sumsq;
  explicit Moments(Index w = 0) : sum(VectorXd::Zero(w)), sumsq(VectorXd::Zero(w)) {}
  void add(const VectorXd& v) {
    sum += v;
    sumsq += v.cwiseProduct(v);
  }
  void merge(const Moments& o) {
    sum += o.sum;
    sumsq += o.sumsq;
  }
};

// Mean and standard error per component.
std::pair<VectorXd, VectorXd> summarize(const Moments& m, std::size_t R) {
  const double r = static_cast<double>(R);
  VectorXd mean = m.sum / r;
  VectorXd var = (m.sumsq / r - mean.cwiseProduct(mean)).cwiseMax(0.0) * (r / (r - 1.0));
  return {mean, (var / r).cwiseSqrt()};
}

// Per-rep statistic: fills `out` from a private stream.
using RepFn = std::function<void(RngStream&, VectorXd& out)>;

Moments run_reps(std::size_t R, Index width, std::uint64_t seed, std::uint64_t tag,
                 unsigned jobs, const RepFn& rep) {
  std::vector<Moments> parts(kChunks, Moments(width));
  parallel_for(kChunks, jobs, [&](std::size_t c) {
    VectorXd v(width);
    for (std::size_t r = c; r < R; r += kChunks) {
      RngStream rng(seed, derive_stream_id(seed, r, tag));
      rep(rng, v);
      parts[c].add(v);
    }
  });
  Moments total(width);
  for (const auto& p : parts) total.merge(p);
  return total;
}

// Fixed sequence x^1..x^T and its vertex samplers.
struct Sequence {
  std::vector<SimplexPoint> xs;
  std::vector<VertexSampler> samplers;
  VectorXd mean;

  Sequence(Index d, std::size_t T, RngStream& rng) : mean(VectorXd::Zero(d)) {
    for (std::size_t t = 0; t < T; ++t) {
      xs.push_back(random_simplex_point(d, rng));
      samplers.emplace_back(xs.back());
      mean += xs.back().coords();
    }
    mean /= static_cast<double>(T);
  }

  // Average of one vertex draw per x^t.
  VectorXd draw(RngStream& rng) const {
    VectorXd a = VectorXd::Zero(mean.size());
    for (const auto& s : samplers) a[s(rng)] += 1.0;
    return a / static_cast<double>(samplers.size());
  }
};

VectorXd draw_point(const VertexSampler& s, Index d, std::size_t K, RngStream& rng) {
  VectorXd a = VectorXd::Zero(d);
  for (std::size_t k = 0; k < K; ++k) a[s(rng)] += 1.0;
  return a / static_cast<double>(K);
}

SuiteReport scalar_upper(SuiteReport rep, const Moments& m, std::size_t R, double bound,
                         bool two_sided) {
  auto [mean, se] = summarize(m, R);
  rep.measured = two_sided ? std::abs(mean[0]) : mean[0];
  rep.bound = bound;
  rep.mc_slack = 3.0 * se[0];
  rep.pass = rep.measured <= rep.bound + rep.mc_slack;
  rep.details.emplace_back("mean", mean[0]);
  rep.details.emplace_back("standard_error", se[0]);
  return rep;
}

}  // namespace

SuiteReport verify_maurey_suite(MaureySuite suite, std::size_t reps, std::uint64_t seed,
                                unsigned jobs) {
  if (reps < 2) throw InvalidParameterError("verify: need at least 2 reps");
  SuiteReport rep;
  rep.name = suite_name(suite);
  rep.reps = reps;
  rep.insufficient_reps = reps < kMinSuiteReps;
  const auto tag = static_cast<std::uint64_t>(suite) + 1;
  RngStream setup(seed, derive_stream_id(seed, tag, role::kVerify));

  switch (suite) {
    case MaureySuite::kValueBias: {
      const Index d = 50;
      const std::size_t T = 64;
      const double L1 = 2.0;
      const Sequence seq(d, T, setup);
      const double f_mean = square_sum(seq.mean);
      Moments m = run_reps(reps, 1, seed, tag, jobs, [&](RngStream& r, VectorXd& v) {
        v[0] = square_sum(seq.draw(r)) - f_mean;
      });
      rep.details.emplace_back("d", d);
      rep.details.emplace_back("T", T);
      return scalar_upper(rep, m, reps, 2.0 * L1 / T, true);
    }
    case MaureySuite::kGradientBiasSecondOrder:
    case MaureySuite::kGradientBiasFirstOrder: {
      const bool cubic = suite == MaureySuite::kGradientBiasSecondOrder;
      const Index d = 20;
      const std::size_t K = 16;
      const SimplexPoint x = random_simplex_point(d, setup);
      const VertexSampler s(x);
      const VectorXd g0 = cubic ? cube_sum_grad(x.coords()) : lse2_grad(x.coords());
      Moments m = run_reps(reps, d, seed, tag, jobs, [&](RngStream& r, VectorXd& v) {
        const VectorXd a = draw_point(s, d, K, r);
        v = (cubic ? cube_sum_grad(a) : lse2_grad(a)) - g0;
      });
      auto [mean, se] = summarize(m, reps);
      // cubic: 2 L2 / K with L2 = 6; log-sum-exp: 4 L1 / sqrt(K) with L1 = 1.
      rep.bound = cubic ? 2.0 * 6.0 / K : 4.0 * 1.0 / std::sqrt(static_cast<double>(K));
      rep.pass = true;
      Index worst = 0;
      double worst_margin = -1e300;
      for (Index j = 0; j < d; ++j) {
        const double margin = std::abs(mean[j]) - 3.0 * se[j];
        if (std::abs(mean[j]) > rep.bound + 3.0 * se[j]) rep.pass = false;
        if (margin > worst_margin) {
          worst_margin = margin;
          worst = j;
        }
      }
      rep.measured = mean.cwiseAbs().maxCoeff();
      rep.mc_slack = 3.0 * se[worst];
      rep.details.emplace_back("d", d);
      rep.details.emplace_back("K", K);
      return rep;
    }
    case MaureySuite::kValueTail: {
      const Index d = 50;
      const std::size_t T = 64;
      const double L0 = 2.0, L1 = 1.0;
      const Sequence seq(d, T, setup);
      const double f_mean = lse2(seq.mean);
      const double betas[2] = {1.0, 2.0};
      double thresh[2];
      for (int b = 0; b < 2; ++b)
        thresh[b] = 2.0 * L1 / T + betas[b] * 2.0 * std::sqrt(2.0) * L0 / std::sqrt(double(T));
      Moments m = run_reps(reps, 3, seed, tag, jobs, [&](RngStream& r, VectorXd& v) {
        const double dev = std::abs(lse2(seq.draw(r)) - f_mean);
        v[0] = dev > thresh[0] ? 1.0 : 0.0;
        v[1] = dev > thresh[1] ? 1.0 : 0.0;
        v[2] = dev;
      });
      auto [mean, se] = summarize(m, reps);
      rep.pass = true;
      for (int b = 0; b < 2; ++b) {
        const double p = std::exp(-betas[b] * betas[b]);
        const double slack = 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
        if (mean[b] > p + slack) rep.pass = false;
        rep.details.emplace_back("exceedance_beta" + std::to_string(b + 1), mean[b]);
        rep.details.emplace_back("bound_beta" + std::to_string(b + 1), p);
        rep.details.emplace_back("threshold_beta" + std::to_string(b + 1), thresh[b]);
      }
      rep.details.emplace_back("mean_abs_deviation", mean[2]);
      // Headline numbers at beta = 2.
      rep.measured = mean[1];
      rep.bound = std::exp(-4.0);
      rep.mc_slack = 3.0 * std::sqrt(rep.bound * (1.0 - rep.bound) / static_cast<double>(reps));
      return rep;
    }
    case MaureySuite::kMaxValueSecondMoment: {
      const Index d = 50;
      const std::size_t T = 64, Mfun = 16;
      const double L0 = 1.0, L1 = 1.0;
      const Sequence seq(d, T, setup);
      MatrixXd C(Mfun, d);
      for (Index j = 0; j < C.rows(); ++j)
        for (Index i = 0; i < d; ++i) C(j, i) = 2.0 * setup.uniform() - 1.0;
      const VectorXd f_mean = 0.5 * (C * seq.mean).array().square().matrix();
      Moments m = run_reps(reps, 1, seed, tag, jobs, [&](RngStream& r, VectorXd& v) {
        const VectorXd fa = 0.5 * (C * seq.draw(r)).array().square().matrix();
        const double e = (fa - f_mean).cwiseAbs().maxCoeff();
        v[0] = e * e;
      });
      const double Td = static_cast<double>(T);
      const double bound = 8.0 * L1 * L1 / (Td * Td) +
                           8.0 * L0 * L0 * (4.0 + std::log(double(Mfun))) / Td;
      rep.details.emplace_back("functions", Mfun);
      return scalar_upper(rep, m, reps, bound, false);
    }
    case MaureySuite::kGradientSecondMomentSecondOrder:
    case MaureySuite::kGradientSecondMomentFirstOrder: {
      const bool cubic = suite == MaureySuite::kGradientSecondMomentSecondOrder;
      const Index d = 50;
      const std::size_t T = 64;
      const Sequence seq(d, T, setup);
      const VectorXd g0 = cubic ? cube_sum_grad(seq.mean) : lse2_grad(seq.mean);
      Moments m = run_reps(reps, 1, seed, tag, jobs, [&](RngStream& r, VectorXd& v) {
        const VectorXd a = seq.draw(r);
        const double e = ((cubic ? cube_sum_grad(a) : lse2_grad(a)) - g0).cwiseAbs().maxCoeff();
        v[0] = e * e;
      });
      const double Td = static_cast<double>(T);
      const double ld = 4.0 + std::log(static_cast<double>(d));
      double bound;
      if (cubic) {
        const double L1 = 6.0, L2 = 6.0;
        bound = 8.0 * L2 * L2 / (Td * Td) + 8.0 * L1 * L1 * ld / Td;
      } else {
        const double L0 = 2.0, L1 = 1.0;
        bound = 8.0 * std::sqrt(2.0) * L1 * L1 / (std::pow(Td, 1.5) * std::sqrt(ld)) +
                8.0 * std::sqrt(2.0) * (L0 * L0 + L1 * L1) * std::sqrt(ld) / std::sqrt(Td);
      }
      return scalar_upper(rep, m, reps, bound, false);
    }
  }
  throw InvalidParameterError("verify: unknown suite");
}

}  // namespace dpssp
