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

// Dense complex Hermitian kernel. Every operator that flows through the
// library (effects, states, witnesses, solver blocks) is a HermitianOperator.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace povmforge {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr std::size_t kDefaultDimCap = 256;
inline constexpr double kDefaultPsdTol = 1e-9;

/// Builds a complex scalar, rejecting NaN and infinite components.
Complex checked_complex(double re, double im);

/// A dim x dim complex Hermitian matrix. The stored matrix is always exactly
/// Hermitian: constructors replace the input by (A + A^dagger) / 2.
class HermitianOperator {
 public:
  /// 1x1 zero operator.
  HermitianOperator();
  explicit HermitianOperator(const ComplexMatrix& m);

  static HermitianOperator zero(std::size_t dim);
  static HermitianOperator identity(std::size_t dim);
  static HermitianOperator diagonal(std::span<const double> entries);
  static HermitianOperator diagonal(std::initializer_list<double> entries);
  /// |v><v| for the given (not necessarily normalized) vector.
  static HermitianOperator projector(const ComplexVector& ket);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(std::size_t row, std::size_t col) const {
    return m_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }
  double trace() const { return m_.trace().real(); }

  HermitianOperator& operator+=(const HermitianOperator& other);
  HermitianOperator& operator-=(const HermitianOperator& other);
  HermitianOperator& operator*=(double scale);

  friend HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) { return a += b; }
  friend HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) { return a -= b; }
  friend HermitianOperator operator*(double s, HermitianOperator a) { return a *= s; }
  friend HermitianOperator operator*(HermitianOperator a, double s) { return a *= s; }

  /// U A U^dagger.
  HermitianOperator conjugated_by(const ComplexMatrix& unitary) const;
  /// Entrywise complex conjugate, i.e. the full transpose of a Hermitian matrix.
  HermitianOperator transpose() const;

 private:
  ComplexMatrix m_;
};

/// Eigenvalues sorted in descending order; column k of `vectors` belongs to
/// values[k].
struct EigenDecomposition {
  Eigen::VectorXd values;
  ComplexMatrix vectors;
};

EigenDecomposition eig_herm(const HermitianOperator& a);
Eigen::VectorXd eigenvalues_descending(const HermitianOperator& a);
double min_eigenvalue(const HermitianOperator& a);
double max_eigenvalue(const HermitianOperator& a);
bool is_psd(const HermitianOperator& a, double tol = kDefaultPsdTol);

/// Kronecker product; throws SizeError when dim(a) * dim(b) exceeds dim_cap.
HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b,
                       std::size_t dim_cap = kDefaultDimCap);

enum class Subsystem { A, B };

/// Position of entry (row, col) after transposing the tensor factors whose
/// flag is set. Dims are listed most-significant factor first.
std::pair<std::size_t, std::size_t> partial_transpose_index(std::size_t row, std::size_t col,
                                                            std::span<const std::size_t> dims,
                                                            const std::vector<bool>& transposed);

/// Partial transpose of a bipartite operator on dA x dB.
HermitianOperator partial_transpose(const HermitianOperator& a,
                                    std::pair<std::size_t, std::size_t> dims, Subsystem subsystem);

/// Partial transpose of a multipartite operator; `transposed` lists the
/// factor indices to transpose.
HermitianOperator partial_transpose(const HermitianOperator& a, std::span<const std::size_t> dims,
                                    std::span<const std::size_t> transposed);

/// A^{-1/2} restricted to the support of A. Eigenvalues at or below tol are
/// treated as zero; eigenvalues below -tol raise NotPsdError.
HermitianOperator inv_sqrt_psd(const HermitianOperator& a, double tol = kDefaultPsdTol);

/// A^{1/2} for PSD A (negative eigenvalues within tol are clipped).
HermitianOperator sqrt_psd(const HermitianOperator& a, double tol = kDefaultPsdTol);

/// Re tr(A^dagger B).
double frob_inner(const HermitianOperator& a, const HermitianOperator& b);
double frobenius_norm(const HermitianOperator& a);

}  // namespace povmforge
