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

#ifndef DPSSP_PROBLEMS_HPP_
#define DPSSP_PROBLEMS_HPP_

#include <filesystem>
#include <memory>
#include <vector>

#include "dpssp/oracles.hpp"
#include "dpssp/privacy.hpp"
#include "dpssp/saddle_solvers.hpp"

namespace dpssp {

// f(x, y; z) = x^T (A + s_z E) y with s_z = -1 for z = 0 and +1 for z = 1,
// each with probability 1/2. x (rows) minimizes, y (columns) maximizes.
class MatrixGame : public PerSampleObjective {
 public:
  explicit MatrixGame(MatrixXd A);
  MatrixGame(MatrixXd A, MatrixXd E);

  // A uniform on [-1, 1], E uniform on [-noise, noise].
  static MatrixGame random(Index d_x, Index d_y, double noise, RngStream& rng);
  // scale * [[1, -1], [-1, 1]].
  static MatrixGame matching_pennies(double scale = 1.0, double noise = 0.0);

  const MatrixXd& payoff() const { return A_; }
  const MatrixXd& perturbation() const { return E_; }
  static double sign(SampleId z) { return z == 0 ? -1.0 : 1.0; }
  Dataset sample_dataset(std::size_t n, RngStream& rng) const;

  Index dim_x() const override { return A_.rows(); }
  Index dim_y() const override { return A_.cols(); }
  Constants constants() const override { return c_; }
  double value(const VectorXd& x, const VectorXd& y, SampleId z) const override;
  VectorXd grad_x(const VectorXd& x, const VectorXd& y, SampleId z) const override;
  VectorXd grad_y(const VectorXd& x, const VectorXd& y, SampleId z) const override;
  double batch_value(const VectorXd& x, const VectorXd& y, Batch b) const override;
  VectorXd batch_grad_x(const VectorXd& x, const VectorXd& y, Batch b) const override;
  VectorXd batch_grad_y(const VectorXd& x, const VectorXd& y, Batch b) const override;
  bool has_population() const override { return true; }
  double population_value(const VectorXd& x, const VectorXd& y) const override;
  VectorXd population_grad_x(const VectorXd& x, const VectorXd& y) const override;
  VectorXd population_grad_y(const VectorXd& x, const VectorXd& y) const override;
  std::optional<MatrixXd> bilinear_payoff() const override { return A_; }
  bool is_biaffine() const override { return true; }

 private:
  double mean_sign(Batch b) const;

  MatrixXd A_;
  MatrixXd E_;
  Constants c_;
};

// Finite domain Z = {0..m-1}, queries q_j: Z -> [-1, 1] stored row-wise.
struct SynthDataProblem {
  Index domain_size = 0;
  MatrixXd queries;          // |Q| x |Z|
  VectorXd distribution;     // true distribution over Z, may be empty
  std::vector<SampleId> data;  // observed categories, may be empty

  void validate() const;  // throws InvalidParameterError / ShapeError
  // Distribution used for population quantities: `distribution` when set,
  // otherwise the empirical distribution of `data`.
  VectorXd reference_distribution() const;
  Dataset sample_dataset(std::size_t n, RngStream& rng) const;
};

// f(x, y; z) = sum_j y_j (q_j(z) - <q_j, x>) over x in the simplex on Z and
// y in the simplex on Q.
class SynthDataObjective : public PerSampleObjective {
 public:
  SynthDataObjective(MatrixXd queries, VectorXd population);

  Index dim_x() const override { return Q_.cols(); }
  Index dim_y() const override { return Q_.rows(); }
  Constants constants() const override { return {2.0, 0.0, 0.0, 2.0}; }
  double value(const VectorXd& x, const VectorXd& y, SampleId z) const override;
  VectorXd grad_x(const VectorXd& x, const VectorXd& y, SampleId z) const override;
  VectorXd grad_y(const VectorXd& x, const VectorXd& y, SampleId z) const override;
  bool has_population() const override { return population_.size() > 0; }
  double population_value(const VectorXd& x, const VectorXd& y) const override;
  VectorXd population_grad_x(const VectorXd& x, const VectorXd& y) const override;
  VectorXd population_grad_y(const VectorXd& x, const VectorXd& y) const override;
  bool is_biaffine() const override { return true; }

 private:
  MatrixXd Q_;
  VectorXd population_;
};

std::unique_ptr<SynthDataObjective> make_synth_data_objective(const SynthDataProblem& p);

struct SynthResult {
  std::vector<SampleId> synthetic;
  double max_error = 0.0;     // max over the original queries
  VectorXd per_query_error;
  SsmdPlan plan;
  SaddleSolution solution;
};

// Runs the vertex-sampled solver on the queries and their negations, takes
// the x-player's released vertex draws and resamples them to n = |data|.
SynthResult synth_data_generate(const SynthDataProblem& p, const PrivacyParams& privacy,
                                RngStream& rng);

// Max query error of a category multiset against a distribution on Z.
VectorXd query_errors(const MatrixXd& queries, const VectorXd& reference,
                      const std::vector<SampleId>& synthetic);

// f(x; z) = 1/2 sum_j w_j (x_j - a_j - s_z b_j)^2.
struct QuadraticLoss {
  VectorXd weight;
  VectorXd center;
  VectorXd noise;
};

struct MaxLossProblem {
  std::vector<QuadraticLoss> losses;

  // Per-component constants over the simplex.
  Constants component_constants() const;
  // Two losses pulling towards opposite vertices of the 2-simplex; the
  // saddle point is x = y = (1/2, 1/2).
  static MaxLossProblem symmetric_pair(double noise = 0.1);
  static MaxLossProblem random(Index d_x, Index components, RngStream& rng);
};

// f(x, y; z) = sum_i y_i f_i(x; z).
class MaxLossObjective : public PerSampleObjective {
 public:
  explicit MaxLossObjective(MaxLossProblem p);

  Index dim_x() const override { return d_x_; }
  Index dim_y() const override { return static_cast<Index>(p_.losses.size()); }
  Constants constants() const override { return c_; }
  double value(const VectorXd& x, const VectorXd& y, SampleId z) const override;
  VectorXd grad_x(const VectorXd& x, const VectorXd& y, SampleId z) const override;
  VectorXd grad_y(const VectorXd& x, const VectorXd& y, SampleId z) const override;
  bool has_population() const override { return true; }
  double population_value(const VectorXd& x, const VectorXd& y) const override;
  VectorXd population_grad_x(const VectorXd& x, const VectorXd& y) const override;
  VectorXd population_grad_y(const VectorXd& x, const VectorXd& y) const override;

  Dataset sample_dataset(std::size_t n, RngStream& rng) const;

 private:
  VectorXd component_values(const VectorXd& x, double s) const;
  VectorXd component_population(const VectorXd& x) const;

  MaxLossProblem p_;
  Index d_x_;
  Constants c_;
};

std::unique_ptr<MaxLossObjective> make_max_loss_objective(const MaxLossProblem& p);

// f(x; z) = sum_j c_j (x_j - a_j - s_z b_j)^2 on the simplex.
class QuadraticSco : public ConvexObjective {
 public:
  QuadraticSco(VectorXd c, VectorXd a, VectorXd b);
  static QuadraticSco random(Index d, RngStream& rng);

  Index dim() const override { return c_.size(); }
  Constants constants() const override { return k_; }
  double value(const VectorXd& x, SampleId z) const override;
  VectorXd grad(const VectorXd& x, SampleId z) const override;
  double batch_value(const VectorXd& x, Batch b) const override;
  VectorXd batch_grad(const VectorXd& x, Batch b) const override;
  bool has_population() const override { return true; }
  double population_value(const VectorXd& x) const override;
  VectorXd population_grad(const VectorXd& x) const override;

  // Exact minimizer of the population objective over the simplex.
  SimplexPoint minimizer() const;
  // max over vertices minus the minimum.
  double range() const;
  Dataset sample_dataset(std::size_t n, RngStream& rng) const;

 private:
  VectorXd c_, a_, b_;
  Constants k_;
};

// Dataset of n iid fair signs (ids 0 and 1).
Dataset sign_dataset(std::size_t n, RngStream& rng);

// Random point on the simplex (flat Dirichlet).
SimplexPoint random_simplex_point(Index d, RngStream& rng);

// Binary payoff file: uint32 rows, uint32 cols (little-endian), then
// rows*cols float64 values in row-major order.
MatrixXd load_payoff_binary(const std::filesystem::path& path);
void save_payoff_binary(const std::filesystem::path& path, const MatrixXd& A);
// One nonnegative integer category per line; blank lines skipped.
std::vector<SampleId> load_categorical_csv(const std::filesystem::path& path);

}  // namespace dpssp

#endif  // DPSSP_PROBLEMS_HPP_
