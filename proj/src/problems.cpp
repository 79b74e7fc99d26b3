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

#include "dpssp/problems.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

namespace dpssp {

Dataset sign_dataset(std::size_t n, RngStream& rng) {
  std::vector<SampleId> s(n);
  for (auto& z : s) z = static_cast<SampleId>(rng.next_u64() >> 63);
  return Dataset(std::move(s));
}

SimplexPoint random_simplex_point(Index d, RngStream& rng) {
  VectorXd v(d);
  for (Index i = 0; i < d; ++i) v[i] = -std::log(rng.uniform_open());
  v /= v.sum();
  return SimplexPoint(std::move(v));
}

// ---- MatrixGame -------------------------------------------------------------

MatrixGame::MatrixGame(MatrixXd A) : MatrixGame(A, MatrixXd::Zero(A.rows(), A.cols())) {}

MatrixGame::MatrixGame(MatrixXd A, MatrixXd E) : A_(std::move(A)), E_(std::move(E)) {
  if (A_.rows() < 1 || A_.cols() < 1) throw ShapeError("MatrixGame: empty payoff");
  if (E_.rows() != A_.rows() || E_.cols() != A_.cols())
    throw ShapeError("MatrixGame: perturbation shape differs from payoff");
  if (!A_.allFinite() || !E_.allFinite())
    throw NumericError("MatrixGame: non-finite entry");
  const double L0 = (A_.cwiseAbs() + E_.cwiseAbs()).maxCoeff();
  if (!(L0 > 0.0)) throw InvalidParameterError("MatrixGame: all-zero payoff");
  c_ = {L0, 0.0, 0.0, L0};
}

MatrixGame MatrixGame::random(Index d_x, Index d_y, double noise, RngStream& rng) {
  MatrixXd A(d_x, d_y), E(d_x, d_y);
  for (Index i = 0; i < d_x; ++i)
    for (Index j = 0; j < d_y; ++j) A(i, j) = 2.0 * rng.uniform() - 1.0;
  for (Index i = 0; i < d_x; ++i)
    for (Index j = 0; j < d_y; ++j) E(i, j) = noise * (2.0 * rng.uniform() - 1.0);
  return MatrixGame(std::move(A), std::move(E));
}

MatrixGame MatrixGame::matching_pennies(double scale, double noise) {
  MatrixXd A(2, 2);
  A << scale, -scale, -scale, scale;
  MatrixXd E = MatrixXd::Constant(2, 2, noise);
  return MatrixGame(std::move(A), std::move(E));
}

Dataset MatrixGame::sample_dataset(std::size_t n, RngStream& rng) const {
  return sign_dataset(n, rng);
}

double MatrixGame::mean_sign(Batch b) const {
  if (b.empty()) throw InvalidParameterError("MatrixGame: empty batch");
  double s = 0.0;
  for (SampleId z : b) s += sign(z);
  return s / static_cast<double>(b.size());
}

double MatrixGame::value(const VectorXd& x, const VectorXd& y, SampleId z) const {
  return x.dot(A_ * y) + sign(z) * x.dot(E_ * y);
}
VectorXd MatrixGame::grad_x(const VectorXd&, const VectorXd& y, SampleId z) const {
  return A_ * y + sign(z) * (E_ * y);
}
VectorXd MatrixGame::grad_y(const VectorXd& x, const VectorXd&, SampleId z) const {
  return A_.transpose() * x + sign(z) * (E_.transpose() * x);
}
double MatrixGame::batch_value(const VectorXd& x, const VectorXd& y, Batch b) const {
  return x.dot(A_ * y) + mean_sign(b) * x.dot(E_ * y);
}
VectorXd MatrixGame::batch_grad_x(const VectorXd&, const VectorXd& y, Batch b) const {
  return A_ * y + mean_sign(b) * (E_ * y);
}
VectorXd MatrixGame::batch_grad_y(const VectorXd& x, const VectorXd&, Batch b) const {
  return A_.transpose() * x + mean_sign(b) * (E_.transpose() * x);
}
double MatrixGame::population_value(const VectorXd& x, const VectorXd& y) const {
  return x.dot(A_ * y);
}
VectorXd MatrixGame::population_grad_x(const VectorXd&, const VectorXd& y) const {
  return A_ * y;
}
VectorXd MatrixGame::population_grad_y(const VectorXd& x, const VectorXd&) const {
  return A_.transpose() * x;
}

// ---- Synthetic data ---------------------------------------------------------

void SynthDataProblem::validate() const {
  if (domain_size < 1) throw InvalidParameterError("synth: domain size must be >= 1");
  if (queries.rows() < 1 || queries.cols() != domain_size)
    throw ShapeError("synth: query matrix must be |Q| x domain_size");
  if (!queries.allFinite() || queries.cwiseAbs().maxCoeff() > 1.0)
    throw InvalidParameterError("synth: query values must lie in [-1, 1]");
  if (distribution.size() > 0) {
    if (distribution.size() != domain_size)
      throw ShapeError("synth: distribution length must equal domain_size");
    if (!is_simplex<double>(distribution))
      throw InvalidParameterError("synth: distribution is not a probability vector");
  }
  for (SampleId z : data)
    if (z >= static_cast<SampleId>(domain_size))
      throw DatasetError("synth: category " + std::to_string(z) + " outside the domain");
}

VectorXd SynthDataProblem::reference_distribution() const {
  if (distribution.size() > 0) return distribution;
  if (data.empty()) throw DatasetError("synth: neither distribution nor data given");
  VectorXd p = VectorXd::Zero(domain_size);
  for (SampleId z : data) p[static_cast<Index>(z)] += 1.0;
  return p / static_cast<double>(data.size());
}

Dataset SynthDataProblem::sample_dataset(std::size_t n, RngStream& rng) const {
  const SimplexPoint p(reference_distribution());
  const VertexSampler draw(p);
  std::vector<SampleId> s(n);
  for (auto& z : s) z = static_cast<SampleId>(draw(rng));
  return Dataset(std::move(s));
}

SynthDataObjective::SynthDataObjective(MatrixXd queries, VectorXd population)
    : Q_(std::move(queries)), population_(std::move(population)) {
  if (Q_.rows() < 1 || Q_.cols() < 1) throw ShapeError("synth: empty query matrix");
  if (population_.size() != 0 && population_.size() != Q_.cols())
    throw ShapeError("synth: population length must equal domain size");
}

double SynthDataObjective::value(const VectorXd& x, const VectorXd& y, SampleId z) const {
  return y.dot(Q_.col(static_cast<Index>(z)) - Q_ * x);
}
VectorXd SynthDataObjective::grad_x(const VectorXd&, const VectorXd& y, SampleId) const {
  return -(Q_.transpose() * y);
}
VectorXd SynthDataObjective::grad_y(const VectorXd& x, const VectorXd&, SampleId z) const {
  return Q_.col(static_cast<Index>(z)) - Q_ * x;
}
double SynthDataObjective::population_value(const VectorXd& x, const VectorXd& y) const {
  if (population_.size() == 0) throw OracleError("synth: no population");
  return y.dot(Q_ * (population_ - x));
}
VectorXd SynthDataObjective::population_grad_x(const VectorXd&, const VectorXd& y) const {
  return -(Q_.transpose() * y);
}
VectorXd SynthDataObjective::population_grad_y(const VectorXd& x, const VectorXd&) const {
  if (population_.size() == 0) throw OracleError("synth: no population");
  return Q_ * (population_ - x);
}

std::unique_ptr<SynthDataObjective> make_synth_data_objective(const SynthDataProblem& p) {
  p.validate();
  VectorXd pop;
  if (p.distribution.size() > 0 || !p.data.empty()) pop = p.reference_distribution();
  return std::make_unique<SynthDataObjective>(p.queries, pop);
}

VectorXd query_errors(const MatrixXd& queries, const VectorXd& reference,
                      const std::vector<SampleId>& synthetic) {
  if (synthetic.empty()) throw DatasetError("query_errors: empty synthetic set");
  VectorXd freq = VectorXd::Zero(queries.cols());
  for (SampleId z : synthetic) {
    if (z >= static_cast<SampleId>(queries.cols()))
      throw DatasetError("query_errors: category outside the domain");
    freq[static_cast<Index>(z)] += 1.0;
  }
  freq /= static_cast<double>(synthetic.size());
  return (queries * (reference - freq)).cwiseAbs();
}

SynthResult synth_data_generate(const SynthDataProblem& p, const PrivacyParams& privacy,
                                RngStream& rng) {
  p.validate();
  if (p.data.empty()) throw DatasetError("synth: no input data");
  // The objective only looks at max_j (q_j(S) - q_j(x)); adding -q_j turns
  // that into the two-sided error.
  MatrixXd sym(2 * p.queries.rows(), p.queries.cols());
  sym << p.queries, -p.queries;
  SynthDataObjective obj(sym, VectorXd());

  const std::size_t n = p.data.size();
  SynthResult out;
  out.plan = plan_alg1(n, privacy, obj.constants(), ell_saddle(obj.dim_x(), obj.dim_y()),
                       Mode::kQuadratic);
  Dataset data(p.data);
  RngStream solver = rng.split(role::kSolver);
  out.solution = solve_smd_vertex(obj, data, out.plan, privacy, solver);

  // solution.x is the empirical distribution of the T released x-vertices.
  RngStream resample = rng.split(role::kDataset);
  const VertexSampler draw(out.solution.x);
  out.synthetic.resize(n);
  for (auto& z : out.synthetic) z = static_cast<SampleId>(draw(resample));

  out.per_query_error = query_errors(p.queries, p.reference_distribution(), out.synthetic);
  out.max_error = out.per_query_error.maxCoeff();
  return out;
}

// ---- Max loss -----------------------------------------------------------------

Constants MaxLossProblem::component_constants() const {
  Constants c;
  for (const auto& f : losses) {
    const VectorXd reach = 1.0 + f.center.array().abs() + f.noise.array().abs();
    c.L0 = std::max(c.L0, (f.weight.array() * reach.array()).maxCoeff());
    c.L1 = std::max(c.L1, f.weight.maxCoeff());
    c.B = std::max(c.B, 0.5 * (f.weight.array() * reach.array().square()).sum());
  }
  return c;
}

MaxLossProblem MaxLossProblem::symmetric_pair(double noise) {
  MaxLossProblem p;
  VectorXd w = VectorXd::Ones(2), b = VectorXd::Constant(2, noise);
  VectorXd a0(2), a1(2);
  a0 << 1.0, 0.0;
  a1 << 0.0, 1.0;
  p.losses.push_back({w, a0, b});
  p.losses.push_back({w, a1, b});
  return p;
}

MaxLossProblem MaxLossProblem::random(Index d_x, Index components, RngStream& rng) {
  MaxLossProblem p;
  for (Index i = 0; i < components; ++i) {
    QuadraticLoss f{VectorXd(d_x), random_simplex_point(d_x, rng).coords(),
                    VectorXd(d_x)};
    for (Index j = 0; j < d_x; ++j) {
      f.weight[j] = 0.5 + 0.5 * rng.uniform();
      f.noise[j] = 0.2 * rng.uniform();
    }
    p.losses.push_back(std::move(f));
  }
  return p;
}

MaxLossObjective::MaxLossObjective(MaxLossProblem p) : p_(std::move(p)) {
  if (p_.losses.empty()) throw ShapeError("max loss: no components");
  d_x_ = p_.losses[0].weight.size();
  for (const auto& f : p_.losses) {
    if (f.weight.size() != d_x_ || f.center.size() != d_x_ || f.noise.size() != d_x_)
      throw ShapeError("max loss: component dimensions differ");
    if ((f.weight.array() < 0.0).any())
      throw InvalidParameterError("max loss: weights must be nonnegative");
  }
  const Constants k = p_.component_constants();
  // Composite constants over (x, y).
  c_ = {std::max(k.L0, k.B), std::max(k.L0, k.L1), std::max(k.L1, k.L2), k.B};
}

VectorXd MaxLossObjective::component_values(const VectorXd& x, double s) const {
  VectorXd v(dim_y());
  for (Index i = 0; i < dim_y(); ++i) {
    const auto& f = p_.losses[static_cast<std::size_t>(i)];
    v[i] = 0.5 * (f.weight.array() * (x - f.center - s * f.noise).array().square()).sum();
  }
  return v;
}

VectorXd MaxLossObjective::component_population(const VectorXd& x) const {
  VectorXd v(dim_y());
  for (Index i = 0; i < dim_y(); ++i) {
    const auto& f = p_.losses[static_cast<std::size_t>(i)];
    v[i] = 0.5 * (f.weight.array() *
                  ((x - f.center).array().square() + f.noise.array().square()))
                     .sum();
  }
  return v;
}

double MaxLossObjective::value(const VectorXd& x, const VectorXd& y, SampleId z) const {
  return y.dot(component_values(x, MatrixGame::sign(z)));
}
VectorXd MaxLossObjective::grad_x(const VectorXd& x, const VectorXd& y, SampleId z) const {
  const double s = MatrixGame::sign(z);
  VectorXd g = VectorXd::Zero(d_x_);
  for (Index i = 0; i < dim_y(); ++i) {
    const auto& f = p_.losses[static_cast<std::size_t>(i)];
    g += y[i] * f.weight.cwiseProduct(x - f.center - s * f.noise);
  }
  return g;
}
VectorXd MaxLossObjective::grad_y(const VectorXd& x, const VectorXd&, SampleId z) const {
  return component_values(x, MatrixGame::sign(z));
}
double MaxLossObjective::population_value(const VectorXd& x, const VectorXd& y) const {
  return y.dot(component_population(x));
}
VectorXd MaxLossObjective::population_grad_x(const VectorXd& x, const VectorXd& y) const {
  VectorXd g = VectorXd::Zero(d_x_);
  for (Index i = 0; i < dim_y(); ++i) {
    const auto& f = p_.losses[static_cast<std::size_t>(i)];
    g += y[i] * f.weight.cwiseProduct(x - f.center);
  }
  return g;
}
VectorXd MaxLossObjective::population_grad_y(const VectorXd& x, const VectorXd&) const {
  return component_population(x);
}
Dataset MaxLossObjective::sample_dataset(std::size_t n, RngStream& rng) const {
  return sign_dataset(n, rng);
}

std::unique_ptr<MaxLossObjective> make_max_loss_objective(const MaxLossProblem& p) {
  return std::make_unique<MaxLossObjective>(p);
}

// ---- Quadratic SCO ------------------------------------------------------------

QuadraticSco::QuadraticSco(VectorXd c, VectorXd a, VectorXd b)
    : c_(std::move(c)), a_(std::move(a)), b_(std::move(b)) {
  if (c_.size() < 1 || a_.size() != c_.size() || b_.size() != c_.size())
    throw ShapeError("QuadraticSco: coefficient lengths differ");
  if (!(c_.array() > 0.0).all())
    throw InvalidParameterError("QuadraticSco: curvatures must be positive");
  const ArrayXd reach = 1.0 + a_.array().abs() + b_.array().abs();
  k_.L0 = (2.0 * c_.array() * reach).maxCoeff();
  k_.L1 = 2.0 * c_.maxCoeff();
  k_.L2 = 0.0;
  k_.B = (c_.array() * reach.square()).sum();
}

QuadraticSco QuadraticSco::random(Index d, RngStream& rng) {
  VectorXd c(d), a(d), b(d);
  const double dd = static_cast<double>(d);
  for (Index j = 0; j < d; ++j) {
    c[j] = 0.5 + 0.5 * rng.uniform();
    a[j] = (3.0 * rng.uniform() - 1.0) / dd;
    b[j] = 0.5 * rng.uniform();
  }
  return QuadraticSco(std::move(c), std::move(a), std::move(b));
}

double QuadraticSco::value(const VectorXd& x, SampleId z) const {
  const double s = MatrixGame::sign(z);
  return (c_.array() * (x - a_ - s * b_).array().square()).sum();
}
VectorXd QuadraticSco::grad(const VectorXd& x, SampleId z) const {
  const double s = MatrixGame::sign(z);
  return 2.0 * c_.cwiseProduct(x - a_ - s * b_);
}
double QuadraticSco::batch_value(const VectorXd& x, Batch b) const {
  if (b.empty()) throw InvalidParameterError("QuadraticSco: empty batch");
  double s = 0.0;
  for (SampleId z : b) s += MatrixGame::sign(z);
  s /= static_cast<double>(b.size());
  // Mean of (u - s_z v)^2 is u^2 - 2 u v mean(s) + v^2 since s^2 = 1.
  const ArrayXd u = (x - a_).array(), v = b_.array();
  return (c_.array() * (u.square() - 2.0 * s * u * v + v.square())).sum();
}
VectorXd QuadraticSco::batch_grad(const VectorXd& x, Batch b) const {
  if (b.empty()) throw InvalidParameterError("QuadraticSco: empty batch");
  double s = 0.0;
  for (SampleId z : b) s += MatrixGame::sign(z);
  s /= static_cast<double>(b.size());
  return 2.0 * c_.cwiseProduct(x - a_ - s * b_);
}
double QuadraticSco::population_value(const VectorXd& x) const {
  return (c_.array() * ((x - a_).array().square() + b_.array().square())).sum();
}
VectorXd QuadraticSco::population_grad(const VectorXd& x) const {
  return 2.0 * c_.cwiseProduct(x - a_);
}

// KKT: x_j = max(0, a_j - nu / (2 c_j)) with nu chosen so the sum is one.
// The sum is nonincreasing in nu; bisect on it.
SimplexPoint QuadraticSco::minimizer() const {
  auto mass = [&](double nu) {
    return (a_.array() - nu / (2.0 * c_.array())).max(0.0).sum();
  };
  double lo = -1.0, hi = 1.0;
  while (mass(lo) < 1.0) lo *= 2.0;
  while (mass(hi) > 1.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mass(mid) > 1.0) lo = mid; else hi = mid;
  }
  VectorXd x = (a_.array() - 0.5 * (lo + hi) / (2.0 * c_.array())).max(0.0);
  x /= x.sum();
  return SimplexPoint(std::move(x));
}

double QuadraticSco::range() const {
  double top = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < dim(); ++i)
    top = std::max(top, population_value(SimplexPoint::vertex(dim(), i).coords()));
  return top - population_value(minimizer().coords());
}

Dataset QuadraticSco::sample_dataset(std::size_t n, RngStream& rng) const {
  return sign_dataset(n, rng);
}

// ---- File formats -------------------------------------------------------------

namespace {

std::uint32_t read_u32_le(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw DatasetError("payoff file truncated");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_u32_le(std::ostream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

}  // namespace

MatrixXd load_payoff_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open payoff file " + path.string());
  const std::uint32_t rows = read_u32_le(in), cols = read_u32_le(in);
  if (rows == 0 || cols == 0) throw ShapeError("payoff file has an empty dimension");
  MatrixXd A(rows, cols);
  for (std::uint32_t i = 0; i < rows; ++i) {
    for (std::uint32_t j = 0; j < cols; ++j) {
      std::uint64_t bits = 0;
      unsigned char b[8];
      if (!in.read(reinterpret_cast<char*>(b), 8)) throw DatasetError("payoff file truncated");
      for (int k = 7; k >= 0; --k) bits = (bits << 8) | b[k];
      A(i, j) = std::bit_cast<double>(bits);
    }
  }
  return A;
}

void save_payoff_binary(const std::filesystem::path& path, const MatrixXd& A) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write payoff file " + path.string());
  write_u32_le(out, static_cast<std::uint32_t>(A.rows()));
  write_u32_le(out, static_cast<std::uint32_t>(A.cols()));
  for (Index i = 0; i < A.rows(); ++i) {
    for (Index j = 0; j < A.cols(); ++j) {
      std::uint64_t bits = std::bit_cast<std::uint64_t>(A(i, j));
      unsigned char b[8];
      for (int k = 0; k < 8; ++k, bits >>= 8) b[k] = static_cast<unsigned char>(bits);
      out.write(reinterpret_cast<const char*>(b), 8);
    }
  }
}

std::vector<SampleId> load_categorical_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open dataset " + path.string());
  std::vector<SampleId> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string tok = line.substr(first, last - first + 1);
    if (tok.find_first_not_of("0123456789") != std::string::npos)
      throw DatasetError(path.string() + ":" + std::to_string(lineno) +
                         ": expected a nonnegative integer category");
    out.push_back(static_cast<SampleId>(std::stoull(tok)));
  }
  return out;
}

}  // namespace dpssp
