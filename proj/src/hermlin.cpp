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

#include "povmforge/hermlin.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "povmforge/errors.hpp"

namespace povmforge {

namespace {

void require_same_dim(const HermitianOperator& a, const HermitianOperator& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw DimensionError(std::string(what) + ": dimension mismatch " + std::to_string(a.dim()) +
                         " vs " + std::to_string(b.dim()));
  }
}

std::size_t product(std::span<const std::size_t> dims) {
  std::size_t p = 1;
  for (std::size_t d : dims) p *= d;
  return p;
}

}  // namespace

Complex checked_complex(double re, double im) {
  if (!std::isfinite(re) || !std::isfinite(im)) {
    throw RangeError("complex scalar with non-finite component");
  }
  return {re, im};
}

HermitianOperator::HermitianOperator() : m_(ComplexMatrix::Zero(1, 1)) {}

HermitianOperator::HermitianOperator(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("HermitianOperator: matrix is not square");
  if (m.rows() < 1) throw DimensionError("HermitianOperator: dimension must be at least 1");
  if (!m.allFinite()) throw RangeError("HermitianOperator: non-finite entry");
  m_ = 0.5 * (m + m.adjoint());
}

HermitianOperator HermitianOperator::zero(std::size_t dim) {
  return HermitianOperator(ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
  return HermitianOperator(
      ComplexMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
}

HermitianOperator HermitianOperator::diagonal(std::span<const double> entries) {
  const auto n = static_cast<Eigen::Index>(entries.size());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = entries[static_cast<std::size_t>(i)];
  return HermitianOperator(m);
}

HermitianOperator HermitianOperator::diagonal(std::initializer_list<double> entries) {
  return diagonal(std::span<const double>(entries.begin(), entries.size()));
}

HermitianOperator HermitianOperator::projector(const ComplexVector& ket) {
  return HermitianOperator(ComplexMatrix(ket * ket.adjoint()));
}

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& other) {
  require_same_dim(*this, other, "operator+");
  m_ += other.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator-=(const HermitianOperator& other) {
  require_same_dim(*this, other, "operator-");
  m_ -= other.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator*=(double scale) {
  m_ *= scale;
  return *this;
}

HermitianOperator HermitianOperator::conjugated_by(const ComplexMatrix& unitary) const {
  if (unitary.rows() != m_.rows() || unitary.cols() != m_.cols()) {
    throw DimensionError("conjugated_by: unitary has the wrong shape");
  }
  return HermitianOperator(ComplexMatrix(unitary * m_ * unitary.adjoint()));
}

HermitianOperator HermitianOperator::transpose() const {
  return HermitianOperator(ComplexMatrix(m_.transpose()));
}

EigenDecomposition eig_herm(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eig_herm: eigensolver did not converge");
  }
  // Eigen returns ascending order.
  const Eigen::Index n = a.matrix().rows();
  EigenDecomposition out{Eigen::VectorXd(n), ComplexMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = solver.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return out;
}

Eigen::VectorXd eigenvalues_descending(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigenvalues: eigensolver did not converge");
  }
  return solver.eigenvalues().reverse();
}

double min_eigenvalue(const HermitianOperator& a) { return eigenvalues_descending(a).minCoeff(); }

double max_eigenvalue(const HermitianOperator& a) { return eigenvalues_descending(a).maxCoeff(); }

bool is_psd(const HermitianOperator& a, double tol) { return min_eigenvalue(a) >= -tol; }

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b, std::size_t dim_cap) {
  const std::size_t da = a.dim();
  const std::size_t db = b.dim();
  if (da * db > dim_cap) {
    throw SizeError("kron: result dimension " + std::to_string(da * db) + " exceeds cap " +
                    std::to_string(dim_cap));
  }
  const auto n = static_cast<Eigen::Index>(da * db);
  const auto ea = static_cast<Eigen::Index>(da);
  const auto eb = static_cast<Eigen::Index>(db);
  ComplexMatrix out(n, n);
  for (Eigen::Index j1 = 0; j1 < ea; ++j1) {
    for (Eigen::Index k1 = 0; k1 < ea; ++k1) {
      out.block(j1 * eb, k1 * eb, eb, eb) = a.matrix()(j1, k1) * b.matrix();
    }
  }
  return HermitianOperator(out);
}

std::pair<std::size_t, std::size_t> partial_transpose_index(std::size_t row, std::size_t col,
                                                            std::span<const std::size_t> dims,
                                                            const std::vector<bool>& transposed) {
  // Walk the factors from least significant to most significant digit.
  std::size_t new_row = 0;
  std::size_t new_col = 0;
  std::size_t stride = 1;
  for (std::size_t f = dims.size(); f-- > 0;) {
    const std::size_t d = dims[f];
    std::size_t r = row % d;
    std::size_t c = col % d;
    row /= d;
    col /= d;
    if (transposed[f]) std::swap(r, c);
    new_row += r * stride;
    new_col += c * stride;
    stride *= d;
  }
  return {new_row, new_col};
}

HermitianOperator partial_transpose(const HermitianOperator& a, std::span<const std::size_t> dims,
                                    std::span<const std::size_t> transposed) {
  if (product(dims) != a.dim()) {
    throw DimensionError("partial_transpose: product of local dims " + std::to_string(product(dims)) +
                         " does not match operator dim " + std::to_string(a.dim()));
  }
  std::vector<bool> mask(dims.size(), false);
  for (std::size_t t : transposed) {
    if (t >= dims.size()) throw DimensionError("partial_transpose: subsystem index out of range");
    mask[t] = true;
  }

  const std::size_t n = a.dim();
  ComplexMatrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      auto [r2, c2] = partial_transpose_index(r, c, dims, mask);
      out(static_cast<Eigen::Index>(r2), static_cast<Eigen::Index>(c2)) = a(r, c);
    }
  }
  return HermitianOperator(out);
}

HermitianOperator partial_transpose(const HermitianOperator& a,
                                    std::pair<std::size_t, std::size_t> dims, Subsystem subsystem) {
  const std::size_t local[2] = {dims.first, dims.second};
  const std::size_t which[1] = {subsystem == Subsystem::A ? std::size_t{0} : std::size_t{1}};
  return partial_transpose(a, local, which);
}

HermitianOperator inv_sqrt_psd(const HermitianOperator& a, double tol) {
  const EigenDecomposition eig = eig_herm(a);
  const Eigen::Index n = eig.values.size();
  if (eig.values(n - 1) < -tol) {
    throw NotPsdError("inv_sqrt_psd: eigenvalue " + std::to_string(eig.values(n - 1)) + " below -tol");
  }
  Eigen::VectorXd scale(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    scale(k) = eig.values(k) > tol ? 1.0 / std::sqrt(eig.values(k)) : 0.0;
  }
  return HermitianOperator(ComplexMatrix(eig.vectors * scale.asDiagonal() * eig.vectors.adjoint()));
}

HermitianOperator sqrt_psd(const HermitianOperator& a, double tol) {
  const EigenDecomposition eig = eig_herm(a);
  const Eigen::Index n = eig.values.size();
  if (eig.values(n - 1) < -tol) {
    throw NotPsdError("sqrt_psd: eigenvalue " + std::to_string(eig.values(n - 1)) + " below -tol");
  }
  Eigen::VectorXd root = eig.values.cwiseMax(0.0).cwiseSqrt();
  return HermitianOperator(ComplexMatrix(eig.vectors * root.asDiagonal() * eig.vectors.adjoint()));
}

double frob_inner(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dim(a, b, "frob_inner");
  return a.matrix().conjugate().cwiseProduct(b.matrix()).sum().real();
}

double frobenius_norm(const HermitianOperator& a) { return a.matrix().norm(); }

}  // namespace povmforge
