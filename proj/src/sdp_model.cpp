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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "povmforge/errors.hpp"
#include "povmforge/sdp.hpp"

namespace povmforge::sdp {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void check_var(VarIndex v, std::size_t num_vars) {
  if (v >= num_vars) {
    throw DimensionError("expression refers to variable " + std::to_string(v) + " but the problem has " +
                         std::to_string(num_vars));
  }
}

void check_expr_vars(const LinExpr& e, std::size_t num_vars) {
  for (const auto& [v, a] : e.terms()) check_var(v, num_vars);
}

// tr(C_term Z) for a stored sparse coefficient.
double sparse_inner(const std::vector<SparseEntry>& entries, const ComplexMatrix& z) {
  double acc = 0.0;
  for (const auto& e : entries) {
    const Complex zrc = z(idx(e.row), idx(e.col));
    if (e.row == e.col) {
      acc += e.value.real() * zrc.real();
    } else {
      acc += 2.0 * (std::conj(e.value) * zrc).real();
    }
  }
  return acc;
}

}  // namespace

// LinExpr ------------------------------------------------------------------------

LinExpr LinExpr::variable(VarIndex v, double coeff) {
  LinExpr e;
  e.terms_.emplace_back(v, coeff);
  return e;
}

double LinExpr::evaluate(const Eigen::VectorXd& x) const {
  double acc = constant_;
  for (const auto& [v, a] : terms_) {
    if (v >= static_cast<std::size_t>(x.size())) throw DimensionError("LinExpr: variable index out of range");
    acc += a * x(idx(v));
  }
  return acc;
}

LinExpr& LinExpr::operator+=(const LinExpr& other) {
  constant_ += other.constant_;
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& other) {
  constant_ -= other.constant_;
  for (const auto& [v, a] : other.terms_) terms_.emplace_back(v, -a);
  return *this;
}

LinExpr& LinExpr::operator*=(double s) {
  constant_ *= s;
  for (auto& t : terms_) t.second *= s;
  return *this;
}

// MatExpr ------------------------------------------------------------------------

MatExpr::MatExpr(std::size_t dim) : dim_(dim), constant_(ComplexMatrix::Zero(idx(dim), idx(dim))) {
  if (dim == 0) throw DimensionError("MatExpr: dimension must be positive");
}

MatExpr::MatExpr(const HermitianOperator& constant) : dim_(constant.dim()), constant_(constant.matrix()) {}

MatExpr MatExpr::scaled(VarIndex v, const HermitianOperator& coeff) {
  MatExpr out(coeff.dim());
  std::vector<SparseEntry> entries;
  for (std::size_t r = 0; r < coeff.dim(); ++r) {
    for (std::size_t c = r; c < coeff.dim(); ++c) {
      if (coeff(r, c) != Complex(0.0, 0.0)) entries.push_back({r, c, coeff(r, c)});
    }
  }
  out.add_term(v, std::move(entries));
  return out;
}

void MatExpr::add_term(VarIndex v, std::vector<SparseEntry> entries) {
  for (auto& e : entries) {
    if (e.row >= dim_ || e.col >= dim_) throw DimensionError("MatExpr: entry outside the matrix");
    if (e.row > e.col) {
      std::swap(e.row, e.col);
      e.value = std::conj(e.value);
    }
    if (e.row == e.col) e.value = Complex(e.value.real(), 0.0);
  }
  terms_.push_back({v, std::move(entries)});
}

MatExpr& MatExpr::add_identity_multiple(const LinExpr& expr) {
  constant_.diagonal().array() += expr.constant();
  for (const auto& [v, a] : expr.terms()) {
    std::vector<SparseEntry> diag;
    diag.reserve(dim_);
    for (std::size_t j = 0; j < dim_; ++j) diag.push_back({j, j, Complex(a, 0.0)});
    terms_.push_back({v, std::move(diag)});
  }
  return *this;
}

MatExpr& MatExpr::operator+=(const MatExpr& other) {
  if (other.dim_ != dim_) throw DimensionError("MatExpr: dimension mismatch in sum");
  constant_ += other.constant_;
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

MatExpr& MatExpr::operator-=(const MatExpr& other) {
  if (other.dim_ != dim_) throw DimensionError("MatExpr: dimension mismatch in difference");
  constant_ -= other.constant_;
  for (MatTerm t : other.terms_) {
    for (auto& e : t.entries) e.value = -e.value;
    terms_.push_back(std::move(t));
  }
  return *this;
}

MatExpr& MatExpr::operator+=(const HermitianOperator& c) {
  if (c.dim() != dim_) throw DimensionError("MatExpr: dimension mismatch with constant");
  constant_ += c.matrix();
  return *this;
}

MatExpr& MatExpr::operator-=(const HermitianOperator& c) {
  if (c.dim() != dim_) throw DimensionError("MatExpr: dimension mismatch with constant");
  constant_ -= c.matrix();
  return *this;
}

MatExpr& MatExpr::operator*=(double s) {
  constant_ *= s;
  for (auto& t : terms_) {
    for (auto& e : t.entries) e.value *= s;
  }
  return *this;
}

MatExpr MatExpr::partial_transpose(const std::vector<std::size_t>& dims,
                                   const std::vector<std::size_t>& transposed) const {
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  if (total != dim_) throw DimensionError("MatExpr::partial_transpose: factor dims do not multiply to dim");
  std::vector<bool> mask(dims.size(), false);
  for (std::size_t f : transposed) {
    if (f >= dims.size()) throw DimensionError("MatExpr::partial_transpose: factor index out of range");
    mask[f] = true;
  }
  MatExpr out(povmforge::partial_transpose(HermitianOperator(constant_), std::span<const std::size_t>(dims),
                                std::span<const std::size_t>(transposed)));
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    MatTerm mapped{t.var, {}};
    mapped.entries.reserve(t.entries.size());
    for (const auto& e : t.entries) {
      auto [r, c] = partial_transpose_index(e.row, e.col, dims, mask);
      if (r <= c) {
        mapped.entries.push_back({r, c, e.value});
      } else {
        mapped.entries.push_back({c, r, std::conj(e.value)});
      }
    }
    out.terms_.push_back(std::move(mapped));
  }
  return out;
}

LinExpr MatExpr::trace() const {
  LinExpr out(constant_.trace().real());
  for (const auto& t : terms_) {
    double a = 0.0;
    for (const auto& e : t.entries) {
      if (e.row == e.col) a += e.value.real();
    }
    if (a != 0.0) out += LinExpr::variable(t.var, a);
  }
  return out;
}

LinExpr MatExpr::inner(const HermitianOperator& c) const {
  if (c.dim() != dim_) throw DimensionError("MatExpr::inner: dimension mismatch");
  LinExpr out(frob_inner(c, HermitianOperator(constant_)));
  for (const auto& t : terms_) {
    const double a = sparse_inner(t.entries, c.matrix());
    if (a != 0.0) out += LinExpr::variable(t.var, a);
  }
  return out;
}

LinExpr MatExpr::entry_real(std::size_t row, std::size_t col) const {
  if (row >= dim_ || col >= dim_) throw DimensionError("MatExpr::entry_real: index out of range");
  const std::size_t r = std::min(row, col);
  const std::size_t c = std::max(row, col);
  LinExpr out(constant_(idx(r), idx(c)).real());
  for (const auto& t : terms_) {
    double a = 0.0;
    for (const auto& e : t.entries) {
      if (e.row == r && e.col == c) a += e.value.real();
    }
    if (a != 0.0) out += LinExpr::variable(t.var, a);
  }
  return out;
}

LinExpr MatExpr::entry_imag(std::size_t row, std::size_t col) const {
  if (row >= dim_ || col >= dim_) throw DimensionError("MatExpr::entry_imag: index out of range");
  if (row == col) return LinExpr();
  const std::size_t r = std::min(row, col);
  const std::size_t c = std::max(row, col);
  const double sign = row < col ? 1.0 : -1.0;
  LinExpr out(sign * constant_(idx(r), idx(c)).imag());
  for (const auto& t : terms_) {
    double a = 0.0;
    for (const auto& e : t.entries) {
      if (e.row == r && e.col == c) a += e.value.imag();
    }
    if (a != 0.0) out += LinExpr::variable(t.var, sign * a);
  }
  return out;
}

HermitianOperator MatExpr::evaluate(const Eigen::VectorXd& x) const {
  ComplexMatrix m = constant_;
  for (const auto& t : terms_) {
    if (t.var >= static_cast<std::size_t>(x.size())) throw DimensionError("MatExpr: variable index out of range");
    const double xv = x(idx(t.var));
    for (const auto& e : t.entries) {
      m(idx(e.row), idx(e.col)) += xv * e.value;
      if (e.row != e.col) m(idx(e.col), idx(e.row)) += xv * std::conj(e.value);
    }
  }
  return HermitianOperator(m);
}

// HermitianVar -------------------------------------------------------------------

MatExpr HermitianVar::expr() const {
  MatExpr out(dim);
  for (std::size_t j = 0; j < dim; ++j) out.add_term(first + j, {{j, j, Complex(1.0, 0.0)}});
  VarIndex v = first + dim;
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t k = j + 1; k < dim; ++k) {
      out.add_term(v++, {{j, k, Complex(kInvSqrt2, 0.0)}});
      out.add_term(v++, {{j, k, Complex(0.0, kInvSqrt2)}});
    }
  }
  return out;
}

HermitianOperator HermitianVar::value(const Eigen::VectorXd& x) const { return expr().evaluate(x); }

// Problem ------------------------------------------------------------------------

VarIndex Problem::add_scalar() { return num_vars_++; }

HermitianVar Problem::add_hermitian(std::size_t dim) {
  if (dim == 0) throw DimensionError("add_hermitian: dimension must be positive");
  HermitianVar v{dim, num_vars_};
  num_vars_ += dim * dim;
  return v;
}

HermitianVar Problem::add_psd_variable(std::size_t dim, std::string label) {
  HermitianVar v = add_hermitian(dim);
  add_psd(v.expr(), std::move(label));
  return v;
}

std::size_t Problem::add_psd(MatExpr expr, std::string label) {
  for (const auto& t : expr.terms()) check_var(t.var, num_vars_);
  cones_.push_back({std::move(expr), std::move(label)});
  return cones_.size() - 1;
}

std::size_t Problem::add_nonneg(const LinExpr& expr, std::string label) {
  MatExpr m(1);
  m.add_identity_multiple(expr);
  return add_psd(std::move(m), std::move(label));
}

std::size_t Problem::add_equality(LinExpr expr) {
  check_expr_vars(expr, num_vars_);
  equalities_.push_back(std::move(expr));
  return equalities_.size() - 1;
}

std::vector<std::size_t> Problem::add_equality(const MatExpr& expr) {
  std::vector<std::size_t> rows;
  const std::size_t d = expr.dim();
  for (std::size_t j = 0; j < d; ++j) rows.push_back(add_equality(expr.entry_real(j, j)));
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = j + 1; k < d; ++k) {
      rows.push_back(add_equality(expr.entry_real(j, k)));
      rows.push_back(add_equality(expr.entry_imag(j, k)));
    }
  }
  return rows;
}

// Dump ---------------------------------------------------------------------------

namespace {

void write_lin(std::ostream& out, const char* tag, const LinExpr& e) {
  out << tag << ' ' << e.constant() << ' ' << e.terms().size() << '\n';
  for (const auto& [v, a] : e.terms()) out << v << ' ' << a << '\n';
}

void write_entries(std::ostream& out, const std::vector<SparseEntry>& entries) {
  for (const auto& e : entries) {
    out << e.row << ' ' << e.col << ' ' << e.value.real() << ' ' << e.value.imag() << '\n';
  }
}

std::string sanitize_label(const std::string& label) {
  if (label.empty()) return "-";
  std::string out = label;
  for (char& ch : out) {
    if (std::isspace(static_cast<unsigned char>(ch))) ch = '_';
  }
  return out;
}

void expect(std::istream& in, const std::string& word) {
  std::string got;
  if (!(in >> got) || got != word) throw ParseError("sdp dump: expected '" + word + "', got '" + got + "'");
}

template <typename T>
T read_value(std::istream& in, const char* what) {
  T v{};
  if (!(in >> v)) throw ParseError(std::string("sdp dump: could not read ") + what);
  return v;
}

LinExpr read_lin(std::istream& in, const std::string& tag) {
  expect(in, tag);
  LinExpr e(read_value<double>(in, "constant"));
  const auto count = read_value<std::size_t>(in, "term count");
  for (std::size_t k = 0; k < count; ++k) {
    const auto v = read_value<std::size_t>(in, "variable");
    const auto a = read_value<double>(in, "coefficient");
    e += LinExpr::variable(v, a);
  }
  return e;
}

std::vector<SparseEntry> read_entries(std::istream& in, std::size_t count) {
  std::vector<SparseEntry> entries;
  entries.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    SparseEntry e{};
    e.row = read_value<std::size_t>(in, "row");
    e.col = read_value<std::size_t>(in, "col");
    const auto re = read_value<double>(in, "real part");
    const auto im = read_value<double>(in, "imaginary part");
    e.value = Complex(re, im);
    entries.push_back(e);
  }
  return entries;
}

}  // namespace

void Problem::dump(std::ostream& out) const {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "povm-forge-sdp 1\n";
  out << "variables " << num_vars_ << '\n';
  write_lin(out, "objective", objective_);
  out << "equalities " << equalities_.size() << '\n';
  for (const auto& e : equalities_) write_lin(out, "eq", e);
  out << "cones " << cones_.size() << '\n';
  for (const auto& cone : cones_) {
    const MatExpr& m = cone.expr;
    out << "cone " << m.dim() << ' ' << m.terms().size() << ' ' << sanitize_label(cone.label) << '\n';
    std::vector<SparseEntry> constant;
    for (std::size_t r = 0; r < m.dim(); ++r) {
      for (std::size_t c = r; c < m.dim(); ++c) {
        const Complex v = m.constant()(idx(r), idx(c));
        if (v != Complex(0.0, 0.0)) constant.push_back({r, c, v});
      }
    }
    out << "const " << constant.size() << '\n';
    write_entries(out, constant);
    for (const auto& t : m.terms()) {
      out << "term " << t.var << ' ' << t.entries.size() << '\n';
      write_entries(out, t.entries);
    }
  }
  out.precision(old_precision);
}

Problem Problem::read_dump(std::istream& in) {
  expect(in, "povm-forge-sdp");
  if (read_value<int>(in, "version") != 1) throw ParseError("sdp dump: unsupported version");
  Problem p;
  expect(in, "variables");
  p.num_vars_ = read_value<std::size_t>(in, "variable count");
  LinExpr objective = read_lin(in, "objective");
  check_expr_vars(objective, p.num_vars_);
  p.objective_ = std::move(objective);
  expect(in, "equalities");
  const auto num_eq = read_value<std::size_t>(in, "equality count");
  for (std::size_t k = 0; k < num_eq; ++k) p.add_equality(read_lin(in, "eq"));
  expect(in, "cones");
  const auto num_cones = read_value<std::size_t>(in, "cone count");
  for (std::size_t j = 0; j < num_cones; ++j) {
    expect(in, "cone");
    const auto dim = read_value<std::size_t>(in, "cone dim");
    const auto num_terms = read_value<std::size_t>(in, "cone term count");
    std::string label = read_value<std::string>(in, "cone label");
    if (label == "-") label.clear();
    expect(in, "const");
    const auto nnz = read_value<std::size_t>(in, "constant entry count");
    ComplexMatrix k = ComplexMatrix::Zero(idx(dim), idx(dim));
    for (const auto& e : read_entries(in, nnz)) {
      if (e.row >= dim || e.col >= dim) throw ParseError("sdp dump: constant entry outside the cone");
      k(idx(e.row), idx(e.col)) = e.value;
      k(idx(e.col), idx(e.row)) = std::conj(e.value);
    }
    MatExpr m(HermitianOperator{k});
    for (std::size_t t = 0; t < num_terms; ++t) {
      expect(in, "term");
      const auto v = read_value<std::size_t>(in, "term variable");
      const auto count = read_value<std::size_t>(in, "term entry count");
      m.add_term(v, read_entries(in, count));
    }
    p.add_psd(std::move(m), std::move(label));
  }
  return p;
}

// Certificates -------------------------------------------------------------------

const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal:
      return "optimal";
    case Status::Infeasible:
      return "infeasible";
    case Status::Unbounded:
      return "unbounded";
    case Status::NumericalFailure:
      return "numerical-failure";
  }
  return "unknown";
}

SolveSummary summarize(const Solution& s) {
  return {s.status, s.iterations, s.primal_value, s.dual_value, s.primal_residual, s.dual_residual, s.message};
}

bool CertificateReport::passes(double feas_tol, double gap_tol) const {
  return max_primal_residual() <= feas_tol && max_dual_violation() <= feas_tol &&
         std::abs(duality_gap) <= gap_tol * (1.0 + std::abs(primal_objective));
}

CertificateReport check_certificate(const Problem& problem, const Solution& solution) {
  const auto n = problem.num_variables();
  if (static_cast<std::size_t>(solution.x.size()) != n ||
      static_cast<std::size_t>(solution.eq_multipliers.size()) != problem.num_equalities() ||
      solution.cone_multipliers.size() != problem.num_cones()) {
    throw DimensionError("check_certificate: solution does not match the problem shape");
  }
  CertificateReport rep;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(idx(n));
  for (const auto& [v, a] : problem.objective().terms()) grad(idx(v)) += a;

  rep.primal_objective = problem.objective().evaluate(solution.x);
  rep.dual_objective = problem.objective().constant();

  for (std::size_t k = 0; k < problem.num_equalities(); ++k) {
    const LinExpr& e = problem.equalities()[k];
    const double yk = solution.eq_multipliers(idx(k));
    rep.max_equality_residual = std::max(rep.max_equality_residual, std::abs(e.evaluate(solution.x)));
    for (const auto& [v, a] : e.terms()) grad(idx(v)) += yk * a;
    rep.dual_objective += yk * e.constant();
  }

  for (std::size_t j = 0; j < problem.num_cones(); ++j) {
    const MatExpr& m = problem.cones()[j].expr;
    const HermitianOperator& z = solution.cone_multipliers[j];
    if (z.dim() != m.dim()) throw DimensionError("check_certificate: multiplier dimension mismatch");
    const HermitianOperator value = m.evaluate(solution.x);
    rep.max_cone_violation = std::max(rep.max_cone_violation, -min_eigenvalue(value));
    rep.max_multiplier_violation = std::max(rep.max_multiplier_violation, -min_eigenvalue(z));
    rep.complementarity += frob_inner(value, z);
    rep.dual_objective -= frob_inner(HermitianOperator(m.constant()), z);
    for (const auto& t : m.terms()) grad(idx(t.var)) -= sparse_inner(t.entries, z.matrix());
  }
  rep.max_dual_residual = n == 0 ? 0.0 : grad.cwiseAbs().maxCoeff();
  rep.duality_gap = rep.primal_objective - rep.dual_objective;
  return rep;
}

}  // namespace povmforge::sdp
