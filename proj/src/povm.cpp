// Copyright 2026 The povm-forge Authors
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

#include "povmforge/povm.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "povmforge/errors.hpp"

namespace povmforge {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_dim(std::size_t d, std::size_t min_d, const char* what) {
  if (d < min_d || d > kDefaultDimCap) {
    throw RangeError(std::string(what) + ": dimension " + std::to_string(d) + " out of range");
  }
}

std::vector<HermitianOperator> zeros(std::size_t d, std::size_t n) {
  return std::vector<HermitianOperator>(n, HermitianOperator::zero(d));
}

Complex standard_complex_normal(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  ComplexMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index c = 0; c < g.cols(); ++c) {
    for (Eigen::Index r = 0; r < g.rows(); ++r) g(r, c) = standard_complex_normal(rng);
  }
  return g;
}

}  // namespace

Povm validate_povm(std::vector<HermitianOperator> effects, PovmTolerance tol) {
  if (effects.empty()) throw DimensionError("validate_povm: a POVM needs at least one effect");
  const std::size_t d = effects.front().dim();
  HermitianOperator sum = HermitianOperator::zero(d);
  for (std::size_t i = 0; i < effects.size(); ++i) {
    if (effects[i].dim() != d) {
      throw DimensionError("validate_povm: effect " + std::to_string(i) + " has dim " +
                           std::to_string(effects[i].dim()) + ", expected " + std::to_string(d));
    }
    const double lo = min_eigenvalue(effects[i]);
    if (lo < -tol.psd) {
      throw NotPsdError("validate_povm: effect " + std::to_string(i) + " has eigenvalue " +
                        std::to_string(lo));
    }
    sum += effects[i];
  }
  const double defect = frobenius_norm(sum - HermitianOperator::identity(d));
  if (defect > tol.completeness) {
    throw NormalizationError("validate_povm: effects sum to identity only up to " + std::to_string(defect));
  }
  return Povm(std::move(effects));
}

Povm repair_povm(std::vector<HermitianOperator> effects, double max_defect) {
  if (effects.empty()) throw DimensionError("repair_povm: a POVM needs at least one effect");
  const std::size_t d = effects.front().dim();
  HermitianOperator sum = HermitianOperator::zero(d);
  for (std::size_t i = 0; i < effects.size(); ++i) {
    if (effects[i].dim() != d) throw DimensionError("repair_povm: effects differ in dimension");
    auto eig = eig_herm(effects[i]);
    if (eig.values.minCoeff() < -max_defect) {
      throw NotPsdError("repair_povm: effect " + std::to_string(i) + " has eigenvalue " +
                        std::to_string(eig.values.minCoeff()));
    }
    const Eigen::VectorXd clipped = eig.values.cwiseMax(0.0);
    effects[i] = HermitianOperator(ComplexMatrix(eig.vectors * clipped.cast<Complex>().asDiagonal() *
                                                 eig.vectors.adjoint()));
    sum += effects[i];
  }
  const double defect = frobenius_norm(sum - HermitianOperator::identity(d));
  if (defect > max_defect) {
    throw NormalizationError("repair_povm: effects are " + std::to_string(defect) + " away from completeness");
  }
  const ComplexMatrix root = inv_sqrt_psd(sum).matrix();
  for (auto& e : effects) e = HermitianOperator(ComplexMatrix(root * e.matrix() * root));
  return validate_povm(std::move(effects));
}

HermitianOperator Ensemble::average_state() const {
  HermitianOperator avg = HermitianOperator::zero(dim());
  for (const auto& item : items_) avg += item.prob * item.state;
  return avg;
}

Ensemble validate_ensemble(std::vector<EnsembleItem> items, EnsembleTolerance tol) {
  if (items.empty()) throw DimensionError("validate_ensemble: ensemble is empty");
  const std::size_t d = items.front().state.dim();
  double total = 0.0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& item = items[i];
    if (!std::isfinite(item.prob) || item.prob < 0.0) {
      throw RangeError("validate_ensemble: item " + std::to_string(i) + " has invalid probability");
    }
    if (item.state.dim() != d) {
      throw DimensionError("validate_ensemble: item " + std::to_string(i) + " has mismatched dim");
    }
    if (std::abs(item.state.trace() - 1.0) > tol.trace) {
      throw NormalizationError("validate_ensemble: state " + std::to_string(i) + " has trace " +
                               std::to_string(item.state.trace()));
    }
    if (min_eigenvalue(item.state) < -tol.psd) {
      throw NotPsdError("validate_ensemble: state " + std::to_string(i) + " is not PSD");
    }
    total += item.prob;
  }
  if (std::abs(total - 1.0) > tol.prob_sum) {
    throw NormalizationError("validate_ensemble: probabilities sum to " + std::to_string(total));
  }
  return Ensemble(std::move(items));
}

Ensemble uniform_pure_ensemble(const std::vector<ComplexVector>& kets) {
  if (kets.empty()) throw DimensionError("uniform_pure_ensemble: no states");
  std::vector<EnsembleItem> items;
  items.reserve(kets.size());
  const double q = 1.0 / static_cast<double>(kets.size());
  for (const auto& ket : kets) items.push_back({q, HermitianOperator::projector(ket.normalized())});
  return validate_ensemble(std::move(items));
}

StochasticMatrix StochasticMatrix::validated(Eigen::MatrixXd entries, double tol) {
  if (entries.rows() < 1 || entries.cols() < 1) throw DimensionError("StochasticMatrix: empty matrix");
  if (!entries.allFinite() || entries.minCoeff() < 0.0) {
    throw RangeError("StochasticMatrix: entries must be finite and non-negative");
  }
  for (Eigen::Index j = 0; j < entries.cols(); ++j) {
    if (std::abs(entries.col(j).sum() - 1.0) > tol) {
      throw NormalizationError("StochasticMatrix: column " + std::to_string(j) + " does not sum to one");
    }
  }
  return StochasticMatrix(std::move(entries));
}

StochasticMatrix StochasticMatrix::identity(std::size_t n) {
  return StochasticMatrix(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
}

StochasticMatrix StochasticMatrix::permutation(const std::vector<std::size_t>& perm) {
  const auto n = static_cast<Eigen::Index>(perm.size());
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  std::vector<bool> hit(perm.size(), false);
  for (std::size_t j = 0; j < perm.size(); ++j) {
    if (perm[j] >= perm.size() || hit[perm[j]]) throw RangeError("StochasticMatrix: not a permutation");
    hit[perm[j]] = true;
    q(static_cast<Eigen::Index>(perm[j]), static_cast<Eigen::Index>(j)) = 1.0;
  }
  return StochasticMatrix(std::move(q));
}

StochasticMatrix StochasticMatrix::random(std::size_t rows, std::size_t cols, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  Eigen::MatrixXd q(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    for (Eigen::Index a = 0; a < q.rows(); ++a) q(a, j) = expo(rng);
    q.col(j) /= q.col(j).sum();
  }
  return StochasticMatrix(std::move(q));
}

Povm convex_combine(double p, const Povm& m, const Povm& n) {
  if (!(p >= 0.0 && p <= 1.0)) throw RangeError("convex_combine: p must lie in [0, 1]");
  if (m.dim() != n.dim() || m.num_outcomes() != n.num_outcomes()) {
    throw DimensionError("convex_combine: POVMs have different shapes");
  }
  std::vector<HermitianOperator> effects;
  effects.reserve(m.num_outcomes());
  for (std::size_t i = 0; i < m.num_outcomes(); ++i) effects.push_back(p * m[i] + (1.0 - p) * n[i]);
  return validate_povm(std::move(effects));
}

Povm post_process(const Povm& m, const StochasticMatrix& q) {
  if (q.cols() != m.num_outcomes()) {
    throw DimensionError("post_process: stochastic matrix has " + std::to_string(q.cols()) +
                         " columns but the POVM has " + std::to_string(m.num_outcomes()) + " outcomes");
  }
  auto effects = zeros(m.dim(), q.rows());
  for (std::size_t a = 0; a < q.rows(); ++a) {
    for (std::size_t j = 0; j < q.cols(); ++j) {
      if (q(a, j) != 0.0) effects[a] += q(a, j) * m[j];
    }
  }
  return validate_povm(std::move(effects));
}

Povm depolarize(const Povm& m, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw RangeError("depolarize: t must lie in [0, 1]");
  const std::size_t d = m.dim();
  const HermitianOperator id = HermitianOperator::identity(d);
  std::vector<HermitianOperator> effects;
  effects.reserve(m.num_outcomes());
  for (const auto& e : m.effects()) {
    effects.push_back(t * e + ((1.0 - t) * e.trace() / static_cast<double>(d)) * id);
  }
  return validate_povm(std::move(effects));
}

Povm unitary_conjugate(const Povm& m, const ComplexMatrix& unitary) {
  std::vector<HermitianOperator> effects;
  effects.reserve(m.num_outcomes());
  for (const auto& e : m.effects()) effects.push_back(e.conjugated_by(unitary));
  return validate_povm(std::move(effects));
}

Povm pad_outcomes(const Povm& m, std::size_t n) {
  if (n < m.num_outcomes()) throw RangeError("pad_outcomes: cannot shrink a POVM");
  std::vector<HermitianOperator> effects = m.effects();
  effects.resize(n, HermitianOperator::zero(m.dim()));
  return validate_povm(std::move(effects));
}

Povm computational_basis_povm(std::size_t d) {
  require_dim(d, 1, "computational_basis_povm");
  std::vector<HermitianOperator> effects;
  for (std::size_t i = 0; i < d; ++i) {
    ComplexVector e = ComplexVector::Zero(static_cast<Eigen::Index>(d));
    e(static_cast<Eigen::Index>(i)) = 1.0;
    effects.push_back(HermitianOperator::projector(e));
  }
  return validate_povm(std::move(effects));
}

Povm trivial_povm(std::size_t d, const std::vector<double>& weights) {
  require_dim(d, 1, "trivial_povm");
  std::vector<HermitianOperator> effects;
  for (double w : weights) {
    if (!(w >= 0.0)) throw RangeError("trivial_povm: weights must be non-negative");
    effects.push_back(w * HermitianOperator::identity(d));
  }
  return validate_povm(std::move(effects));
}

Povm uniform_trivial_povm(std::size_t d, std::size_t n) {
  return trivial_povm(d, std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ComplexVector fourier_ket(std::size_t d, std::size_t j) {
  ComplexVector v(static_cast<Eigen::Index>(d));
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t k = 0; k < d; ++k) {
    const double phase = kTwoPi * static_cast<double>((j * k) % d) / static_cast<double>(d);
    v(static_cast<Eigen::Index>(k)) = norm * Complex(std::cos(phase), std::sin(phase));
  }
  return v;
}

Povm fourier_povm(std::size_t d) {
  require_dim(d, 2, "fourier_povm");
  std::vector<HermitianOperator> effects;
  for (std::size_t j = 0; j < d; ++j) effects.push_back(HermitianOperator::projector(fourier_ket(d, j)));
  return validate_povm(std::move(effects));
}

Povm truncated_fourier_povm(std::size_t d, std::size_t n) {
  require_dim(d, 3, "truncated_fourier_povm");
  if (n < 2 || n >= d) throw RangeError("truncated_fourier_povm: need 2 <= n < d");
  std::vector<HermitianOperator> effects;
  HermitianOperator rest = HermitianOperator::identity(d);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    effects.push_back(HermitianOperator::projector(fourier_ket(d, j)));
    rest -= effects.back();
  }
  effects.push_back(rest);
  return validate_povm(std::move(effects));
}

Ensemble fourier_state_ensemble(std::size_t d, std::size_t n) {
  require_dim(d, 2, "fourier_state_ensemble");
  if (n < 1 || n > d) throw RangeError("fourier_state_ensemble: need 1 <= n <= d");
  std::vector<ComplexVector> kets;
  for (std::size_t j = 0; j < n; ++j) kets.push_back(fourier_ket(d, j));
  return uniform_pure_ensemble(kets);
}

ComplexVector bell_ket(std::size_t d, std::size_t n, std::size_t m) {
  if (d * d > kDefaultDimCap) throw SizeError("bell_ket: dimension exceeds cap");
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(d * d));
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t j = 0; j < d; ++j) {
    const double phase = kTwoPi * static_cast<double>((j * n) % d) / static_cast<double>(d);
    v(static_cast<Eigen::Index>(j * d + (j + m) % d)) = norm * Complex(std::cos(phase), std::sin(phase));
  }
  return v;
}

Ensemble bell_states(std::size_t d) {
  require_dim(d, 2, "bell_states");
  std::vector<ComplexVector> kets;
  for (std::size_t n = 0; n < d; ++n) {
    for (std::size_t m = 0; m < d; ++m) kets.push_back(bell_ket(d, n, m));
  }
  return uniform_pure_ensemble(kets);
}

Povm bell_measurement(std::size_t d) { return generalized_bell_measurement(d, d); }

namespace {

// Maps the D x D Bell ket into dA x dB through |i>|j> -> |i>|j>, i, j < D.
ComplexVector embed_bell_ket(std::size_t dA, std::size_t dB, std::size_t n, std::size_t m) {
  const std::size_t D = std::min(dA, dB);
  const ComplexVector small = bell_ket(D, n, m);
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dA * dB));
  for (std::size_t i = 0; i < D; ++i) {
    for (std::size_t j = 0; j < D; ++j) {
      v(static_cast<Eigen::Index>(i * dB + j)) = small(static_cast<Eigen::Index>(i * D + j));
    }
  }
  return v;
}

}  // namespace

Povm generalized_bell_measurement(std::size_t dA, std::size_t dB) {
  require_dim(dA, 2, "generalized_bell_measurement");
  require_dim(dB, 2, "generalized_bell_measurement");
  if (dA * dB > kDefaultDimCap) throw SizeError("generalized_bell_measurement: dimension exceeds cap");
  const std::size_t D = std::min(dA, dB);
  std::vector<HermitianOperator> effects;
  HermitianOperator complement = HermitianOperator::identity(dA * dB);
  for (std::size_t n = 0; n < D; ++n) {
    for (std::size_t m = 0; m < D; ++m) {
      effects.push_back(HermitianOperator::projector(embed_bell_ket(dA, dB, n, m)));
      complement -= effects.back();
    }
  }
  if (dA != dB) effects.front() += complement;
  return validate_povm(std::move(effects));
}

Ensemble embedded_bell_states(std::size_t dA, std::size_t dB) {
  const std::size_t D = std::min(dA, dB);
  std::vector<ComplexVector> kets;
  for (std::size_t n = 0; n < D; ++n) {
    for (std::size_t m = 0; m < D; ++m) kets.push_back(embed_bell_ket(dA, dB, n, m));
  }
  return uniform_pure_ensemble(kets);
}

ComplexVector haar_ket(std::size_t dim, Rng& rng) {
  ComplexVector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = standard_complex_normal(rng);
  return v / v.norm();
}

Ensemble haar_ensemble(std::size_t num_qubits, std::size_t count, std::uint64_t seed) {
  if (num_qubits < 1 || (std::size_t{1} << num_qubits) > kDefaultDimCap) {
    throw SizeError("haar_ensemble: number of qubits out of range");
  }
  if (count < 1) throw RangeError("haar_ensemble: need at least one state");
  const std::size_t dim = std::size_t{1} << num_qubits;
  Rng rng = make_rng(seed);
  std::vector<ComplexVector> kets;
  kets.reserve(count);
  for (std::size_t i = 0; i < count; ++i) kets.push_back(haar_ket(dim, rng));
  return uniform_pure_ensemble(kets);
}

HermitianOperator random_density(std::size_t dim, std::size_t rank, Rng& rng) {
  if (rank == 0) rank = dim;
  const ComplexMatrix g = ginibre(dim, rank, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return HermitianOperator(rho);
}

Povm random_povm(std::size_t d, std::size_t n, Rng& rng, std::size_t rank) {
  require_dim(d, 1, "random_povm");
  if (n < 1) throw RangeError("random_povm: need at least one outcome");
  if (rank == 0) rank = d;
  std::vector<HermitianOperator> raw;
  HermitianOperator total = HermitianOperator::zero(d);
  for (std::size_t i = 0; i < n; ++i) {
    const ComplexMatrix g = ginibre(d, rank, rng);
    raw.emplace_back(ComplexMatrix(g * g.adjoint()));
    total += raw.back();
  }
  const ComplexMatrix root = inv_sqrt_psd(total, 1e-12).matrix();
  std::vector<HermitianOperator> effects;
  effects.reserve(n);
  for (const auto& a : raw) effects.emplace_back(ComplexMatrix(root * a.matrix() * root));
  return validate_povm(std::move(effects));
}

Povm random_incoherent_povm(std::size_t d, std::size_t n, Rng& rng) {
  const StochasticMatrix q = StochasticMatrix::random(n, d, rng);
  return post_process(computational_basis_povm(d), q);
}

Ensemble random_ensemble(std::size_t d, std::size_t n, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) total += (x = expo(rng));
  std::vector<EnsembleItem> items;
  items.reserve(n);
  for (std::size_t i = 0; i < n; ++i) items.push_back({w[i] / total, random_density(d, 0, rng)});
  return validate_ensemble(std::move(items));
}

ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
  const ComplexMatrix g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix column phases so the distribution is Haar.
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    const Complex diag = r(k, k);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(k) *= diag / mag;
  }
  return q;
}

}  // namespace povmforge
