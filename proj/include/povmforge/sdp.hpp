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

// Dense semidefinite programming for small block-structured problems.
//
// A Problem is stated over real scalar variables x:
//
//   minimize    c0 + c^T x
//   subject to  a_k0 + a_k^T x = 0                       (equalities)
//               K_j + sum_v x_v C_jv  is PSD             (Hermitian cones)
//
// Hermitian matrix variables are groups of dim^2 scalars in the orthonormal
// basis {E_jj, (E_jk + E_kj)/sqrt2, i(E_jk - E_kj)/sqrt2}, so a PSD matrix
// variable is simply a cone whose expression is the variable itself.
//
// The associated dual is
//
//   maximize    c0 + sum_k y_k a_k0 - sum_j <K_j, Z_j>
//   subject to  c_v + sum_k y_k a_kv - sum_j <C_jv, Z_j> = 0   for every v
//               Z_j PSD
//
// and `solve` returns both sides: y are the equality multipliers and Z_j the
// cone multipliers.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "povmforge/hermlin.hpp"

namespace povmforge::sdp {

using VarIndex = std::size_t;

/// Real affine functional constant + sum coeff * x_var.
class LinExpr {
 public:
  LinExpr() = default;
  LinExpr(double constant) : constant_(constant) {}  // NOLINT: implicit on purpose
  static LinExpr variable(VarIndex v, double coeff = 1.0);

  double constant() const { return constant_; }
  const std::vector<std::pair<VarIndex, double>>& terms() const { return terms_; }
  double evaluate(const Eigen::VectorXd& x) const;

  LinExpr& operator+=(const LinExpr& other);
  LinExpr& operator-=(const LinExpr& other);
  LinExpr& operator*=(double s);
  friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
  friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
  friend LinExpr operator*(double s, LinExpr a) { return a *= s; }
  friend LinExpr operator*(LinExpr a, double s) { return a *= s; }

 private:
  std::vector<std::pair<VarIndex, double>> terms_;
  double constant_ = 0.0;
};

/// Entry of a sparse Hermitian coefficient. Only row <= col is stored; the
/// entry (col, row) is the conjugate. Duplicate positions add up.
struct SparseEntry {
  std::size_t row;
  std::size_t col;
  Complex value;
};

struct MatTerm {
  VarIndex var;
  std::vector<SparseEntry> entries;
};

/// Hermitian-valued affine expression constant + sum x_v C_v.
class MatExpr {
 public:
  explicit MatExpr(std::size_t dim);
  explicit MatExpr(const HermitianOperator& constant);
  /// x_v * coeff.
  static MatExpr scaled(VarIndex v, const HermitianOperator& coeff);

  std::size_t dim() const { return dim_; }
  const ComplexMatrix& constant() const { return constant_; }
  const std::vector<MatTerm>& terms() const { return terms_; }

  void add_term(VarIndex v, std::vector<SparseEntry> entries);
  /// this += expr * I.
  MatExpr& add_identity_multiple(const LinExpr& expr);

  MatExpr& operator+=(const MatExpr& other);
  MatExpr& operator-=(const MatExpr& other);
  MatExpr& operator+=(const HermitianOperator& c);
  MatExpr& operator-=(const HermitianOperator& c);
  MatExpr& operator*=(double s);
  friend MatExpr operator+(MatExpr a, const MatExpr& b) { return a += b; }
  friend MatExpr operator-(MatExpr a, const MatExpr& b) { return a -= b; }
  friend MatExpr operator+(MatExpr a, const HermitianOperator& b) { return a += b; }
  friend MatExpr operator-(MatExpr a, const HermitianOperator& b) { return a -= b; }
  friend MatExpr operator*(double s, MatExpr a) { return a *= s; }

  /// Applies the partial transpose on the listed tensor factors to the
  /// constant and every coefficient.
  MatExpr partial_transpose(const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& transposed) const;

  LinExpr trace() const;
  /// tr(C X) for a constant Hermitian C.
  LinExpr inner(const HermitianOperator& c) const;
  LinExpr entry_real(std::size_t row, std::size_t col) const;
  LinExpr entry_imag(std::size_t row, std::size_t col) const;

  HermitianOperator evaluate(const Eigen::VectorXd& x) const;

 private:
  std::size_t dim_;
  ComplexMatrix constant_;
  std::vector<MatTerm> terms_;
};

/// A block of dim^2 consecutive scalar variables viewed as a Hermitian matrix.
struct HermitianVar {
  std::size_t dim = 0;
  VarIndex first = 0;

  MatExpr expr() const;
  HermitianOperator value(const Eigen::VectorXd& x) const;
};

struct ConeConstraint {
  MatExpr expr;
  std::string label;
};

class Problem {
 public:
  VarIndex add_scalar();
  HermitianVar add_hermitian(std::size_t dim);
  /// Hermitian variable constrained to be PSD.
  HermitianVar add_psd_variable(std::size_t dim, std::string label = {});

  /// expr is PSD. Returns the cone index.
  std::size_t add_psd(MatExpr expr, std::string label = {});
  /// expr >= 0 as a 1x1 cone.
  std::size_t add_nonneg(const LinExpr& expr, std::string label = {});
  /// expr == 0. Returns the equality index.
  std::size_t add_equality(LinExpr expr);
  /// Every real coordinate of expr is zero; returns the dim^2 equality indices.
  std::vector<std::size_t> add_equality(const MatExpr& expr);

  /// Objective to minimize.
  void set_objective(LinExpr objective) { objective_ = std::move(objective); }

  std::size_t num_variables() const { return num_vars_; }
  std::size_t num_cones() const { return cones_.size(); }
  std::size_t num_equalities() const { return equalities_.size(); }
  const std::vector<ConeConstraint>& cones() const { return cones_; }
  const std::vector<LinExpr>& equalities() const { return equalities_; }
  const LinExpr& objective() const { return objective_; }

  /// Plain-text dump (format documented in docs/sdp_dump_format.md).
  void dump(std::ostream& out) const;
  static Problem read_dump(std::istream& in);

 private:
  std::size_t num_vars_ = 0;
  std::vector<ConeConstraint> cones_;
  std::vector<LinExpr> equalities_;
  LinExpr objective_;
};

enum class Status { Optimal, Infeasible, Unbounded, NumericalFailure };

const char* to_string(Status s);

struct IterationInfo {
  int iteration = 0;
  double primal_cost = 0.0;
  double dual_cost = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double complementarity = 0.0;
  double tau = 0.0;
  double kappa = 0.0;
  double step = 0.0;
  double sigma = 0.0;
  /// pcost - dcost minus the part explained by the current infeasibility;
  /// equals <s, z> / tau^2 and is never negative.
  double weak_duality_slack = 0.0;
};

struct Options {
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iter = 200;
  double step_fraction = 0.98;
  int refinement_steps = 4;
  /// When the iteration stalls (step collapse, lost interiority, failed
  /// factorization, iteration limit) but the last iterate meets every
  /// tolerance loosened by this factor, it is returned as Optimal and the
  /// message says "reduced accuracy". Zero disables.
  double reduced_accuracy_factor = 100.0;
#ifdef NDEBUG
  bool check_weak_duality = false;
#else
  bool check_weak_duality = true;
#endif
  std::function<void(const IterationInfo&)> monitor;
};

struct Solution {
  Status status = Status::NumericalFailure;
  double primal_value = 0.0;
  double dual_value = 0.0;
  Eigen::VectorXd x;
  /// One multiplier per equality.
  Eigen::VectorXd eq_multipliers;
  /// One PSD multiplier per cone.
  std::vector<HermitianOperator> cone_multipliers;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double complementarity = 0.0;
  /// Smallest weak-duality slack over all iterates (only when checked).
  double min_weak_duality_slack = 0.0;
  std::string message;

  double value(VarIndex v) const { return x(static_cast<Eigen::Index>(v)); }
  HermitianOperator value(const HermitianVar& var) const { return var.value(x); }
};

/// Scalar diagnostics of a solve, small enough to attach to every result.
struct SolveSummary {
  Status status = Status::NumericalFailure;
  int iterations = 0;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  std::string message;
};

SolveSummary summarize(const Solution& s);

/// Interior-point solve. Deterministic for a fixed problem. Solver failures are
/// reported through `status`, never thrown.
Solution solve(const Problem& problem, const Options& opts = {});

struct CertificateReport {
  /// Largest |equality residual|.
  double max_equality_residual = 0.0;
  /// Most negative eigenvalue over all cone expressions at x (0 if all PSD).
  double max_cone_violation = 0.0;
  /// Largest |stationarity residual| over variables.
  double max_dual_residual = 0.0;
  /// Most negative eigenvalue over all cone multipliers (0 if all PSD).
  double max_multiplier_violation = 0.0;
  /// sum_j <expr_j(x), Z_j>.
  double complementarity = 0.0;
  /// primal objective - dual objective, both recomputed from the problem.
  double duality_gap = 0.0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;

  double max_primal_residual() const { return std::max(max_equality_residual, max_cone_violation); }
  double max_dual_violation() const { return std::max(max_dual_residual, max_multiplier_violation); }
  bool passes(double feas_tol, double gap_tol) const;
};

/// Recomputes every residual from the problem's expressions, independent of
/// the solver's internal representation.
CertificateReport check_certificate(const Problem& problem, const Solution& solution);

}  // namespace povmforge::sdp
