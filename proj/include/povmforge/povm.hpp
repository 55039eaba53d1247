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

#pragma once

// Measurement and ensemble data model, the special measurements and states
// used throughout the toolkit, and the maps acting on measurements.

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "povmforge/hermlin.hpp"
#include "povmforge/random.hpp"

namespace povmforge {

struct PovmTolerance {
  double psd = kDefaultPsdTol;
  /// Frobenius norm of (sum of effects - identity).
  double completeness = 1e-8;
};

/// Ordered tuple of n >= 1 PSD effects on C^d summing to the identity.
class Povm {
 public:
  std::size_t dim() const { return effects_.front().dim(); }
  std::size_t num_outcomes() const { return effects_.size(); }
  const std::vector<HermitianOperator>& effects() const { return effects_; }
  const HermitianOperator& operator[](std::size_t i) const { return effects_[i]; }

 private:
  friend Povm validate_povm(std::vector<HermitianOperator> effects, PovmTolerance tol);
  explicit Povm(std::vector<HermitianOperator> effects) : effects_(std::move(effects)) {}

  std::vector<HermitianOperator> effects_;
};

/// Checks positivity and completeness; throws NotPsdError / NormalizationError /
/// DimensionError naming the offending effect.
Povm validate_povm(std::vector<HermitianOperator> effects, PovmTolerance tol = {});

/// Turns nearly valid effects (e.g. an SDP optimizer) into a POVM: negative
/// eigenvalues are clipped and the effects are renormalized by S^{-1/2} on both
/// sides, S being their sum. Throws NormalizationError if the input is farther
/// than `max_defect` (Frobenius) from completeness, NotPsdError if an effect has
/// an eigenvalue below -max_defect.
Povm repair_povm(std::vector<HermitianOperator> effects, double max_defect = 1e-5);

struct EnsembleItem {
  double prob = 0.0;
  HermitianOperator state;
};

struct EnsembleTolerance {
  double prob_sum = 1e-10;
  double psd = kDefaultPsdTol;
  double trace = 1e-8;
};

/// Probability-weighted list of density operators of a common dimension.
class Ensemble {
 public:
  std::size_t size() const { return items_.size(); }
  std::size_t dim() const { return items_.front().state.dim(); }
  const std::vector<EnsembleItem>& items() const { return items_; }
  const EnsembleItem& operator[](std::size_t i) const { return items_[i]; }

  /// Sum_i q_i rho_i.
  HermitianOperator average_state() const;

 private:
  friend Ensemble validate_ensemble(std::vector<EnsembleItem> items, EnsembleTolerance tol);
  explicit Ensemble(std::vector<EnsembleItem> items) : items_(std::move(items)) {}

  std::vector<EnsembleItem> items_;
};

Ensemble validate_ensemble(std::vector<EnsembleItem> items, EnsembleTolerance tol = {});

/// Uniform ensemble of the given pure states (kets are normalized here).
Ensemble uniform_pure_ensemble(const std::vector<ComplexVector>& kets);

/// Column-stochastic matrix q(a|j): column j is the distribution of the new
/// outcome a given the original outcome j.
class StochasticMatrix {
 public:
  static StochasticMatrix validated(Eigen::MatrixXd entries, double tol = 1e-12);
  static StochasticMatrix identity(std::size_t n);
  /// Outcome j is relabelled to perm[j].
  static StochasticMatrix permutation(const std::vector<std::size_t>& perm);
  static StochasticMatrix random(std::size_t rows, std::size_t cols, Rng& rng);

  std::size_t rows() const { return static_cast<std::size_t>(q_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(q_.cols()); }
  double operator()(std::size_t a, std::size_t j) const {
    return q_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXd& entries() const { return q_; }

 private:
  explicit StochasticMatrix(Eigen::MatrixXd q) : q_(std::move(q)) {}
  Eigen::MatrixXd q_;
};

// Maps on measurements -------------------------------------------------------

/// Effect-wise p M_i + (1 - p) N_i.
Povm convex_combine(double p, const Povm& m, const Povm& n);

/// Effect a of the result is sum_j q(a|j) M_j.
Povm post_process(const Povm& m, const StochasticMatrix& q);

/// Effect-wise t M_i + (1 - t) tr(M_i) / d * I.
Povm depolarize(const Povm& m, double t);

/// Effect-wise U M_i U^dagger.
Povm unitary_conjugate(const Povm& m, const ComplexMatrix& unitary);

/// Appends zero effects until the POVM has n outcomes.
Povm pad_outcomes(const Povm& m, std::size_t n);

// Special measurements ---------------------------------------------------------

Povm computational_basis_povm(std::size_t d);
/// Effects weights[i] * I; weights must sum to one.
Povm trivial_povm(std::size_t d, const std::vector<double>& weights);
/// n effects equal to I / n.
Povm uniform_trivial_povm(std::size_t d, std::size_t n);

/// (1/sqrt d) sum_k exp(2 pi i j k / d) |k>.
ComplexVector fourier_ket(std::size_t d, std::size_t j);
/// Rank-one projective measurement onto the Fourier basis.
Povm fourier_povm(std::size_t d);
/// First n - 1 Fourier projectors plus the completion effect; 2 <= n < d.
Povm truncated_fourier_povm(std::size_t d, std::size_t n);
/// Uniform ensemble of the first n Fourier states (n <= d).
Ensemble fourier_state_ensemble(std::size_t d, std::size_t n);

/// (1/sqrt d) sum_j exp(2 pi i j n / d) |j> (x) |(j + m) mod d>.
ComplexVector bell_ket(std::size_t d, std::size_t n, std::size_t m);
/// Uniform ensemble of the d^2 generalized Bell states, outcome index n * d + m.
Ensemble bell_states(std::size_t d);
/// Projective measurement onto the d^2 generalized Bell states.
Povm bell_measurement(std::size_t d);
/// Generalized Bell measurement on dA x dB: Bell projectors of the
/// D = min(dA, dB) subspace spanned by |i>|j>, i, j < D, with the projector
/// onto the orthogonal complement added to outcome 0.
Povm generalized_bell_measurement(std::size_t dA, std::size_t dB);
/// Bell ensemble of the D = min(dA, dB) subspace embedded in dA x dB.
Ensemble embedded_bell_states(std::size_t dA, std::size_t dB);

// Random objects ---------------------------------------------------------------

/// Haar-random unit vector in C^dim (normalized complex Gaussian vector).
ComplexVector haar_ket(std::size_t dim, Rng& rng);
/// `count` iid Haar-random pure states on N qubits, uniform probabilities.
Ensemble haar_ensemble(std::size_t num_qubits, std::size_t count, std::uint64_t seed);
/// Random density matrix G G^dagger / tr from a dim x rank Ginibre matrix.
HermitianOperator random_density(std::size_t dim, std::size_t rank, Rng& rng);
/// Random n-outcome POVM: effects S^{-1/2} A_i S^{-1/2} for random PSD A_i.
Povm random_povm(std::size_t d, std::size_t n, Rng& rng, std::size_t rank = 0);
/// Random incoherent POVM: effects sum_j q(i|j) |j><j| with random stochastic q.
Povm random_incoherent_povm(std::size_t d, std::size_t n, Rng& rng);
/// Random ensemble of n mixed states with Dirichlet-like random weights.
Ensemble random_ensemble(std::size_t d, std::size_t n, Rng& rng);
/// Random unitary from the QR decomposition of a Ginibre matrix.
ComplexMatrix random_unitary(std::size_t dim, Rng& rng);

}  // namespace povmforge
