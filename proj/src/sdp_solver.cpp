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

// Homogeneous self-dual interior-point method with Nesterov-Todd scaling on
// complex Hermitian blocks and a Mehrotra predictor-corrector step.
//
// Internally the problem is   min c'x  s.t.  Ax = b,  s = h - Gx in the cone,
// with every block stored in real svec coordinates (diagonal entries, then
// sqrt2 Re and sqrt2 Im of the strict upper triangle), so that dot products
// of svec vectors equal trace inner products.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include "povmforge/errors.hpp"
#include "povmforge/sdp.hpp"

namespace povmforge::sdp {

namespace {

using Eigen::Index;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

constexpr double kSqrt2 = 1.41421356237309504880;

void svec(const ComplexMatrix& x, double* out) {
  const Index d = x.rows();
  for (Index j = 0; j < d; ++j) out[j] = x(j, j).real();
  Index p = d;
  for (Index j = 0; j < d; ++j) {
    for (Index k = j + 1; k < d; ++k) {
      out[p++] = kSqrt2 * x(j, k).real();
      out[p++] = kSqrt2 * x(j, k).imag();
    }
  }
}

ComplexMatrix smat(const double* v, Index d) {
  ComplexMatrix x(d, d);
  for (Index j = 0; j < d; ++j) x(j, j) = v[j];
  Index p = d;
  for (Index j = 0; j < d; ++j) {
    for (Index k = j + 1; k < d; ++k) {
      const Complex e = Complex(v[p], v[p + 1]) / kSqrt2;
      x(j, k) = e;
      x(k, j) = std::conj(e);
      p += 2;
    }
  }
  return x;
}

Index pair_offset(Index d, Index r, Index c) { return d + 2 * (r * d - r * (r + 1) / 2 + (c - r - 1)); }

double min_eig(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
  return es.eigenvalues()(0);
}

struct Block {
  Index dim = 0;
  Index size = 0;    // dim^2
  Index offset = 0;  // into the stacked svec vectors
  std::vector<Index> cols;
  Mat g;  // size x cols.size(); s = h - G x on this block

  // Nesterov-Todd scaling: lambda = r^H z r = rti^H s rti (diagonal).
  ComplexMatrix r, rti, tt;  // tt = rti rti^H
  Vec lambda;
};

struct Compiled {
  Index n = 0, m = 0, ns = 0;
  Vec c;
  double c0 = 0.0;
  Mat a;
  Vec b;
  Vec h;
  double nu = 0.0;
  std::vector<Block> blocks;
};

Compiled compile(const Problem& p) {
  Compiled cp;
  cp.n = static_cast<Index>(p.num_variables());
  cp.m = static_cast<Index>(p.num_equalities());
  cp.c = Vec::Zero(cp.n);
  cp.c0 = p.objective().constant();
  for (const auto& [v, a] : p.objective().terms()) cp.c(static_cast<Index>(v)) += a;

  cp.a = Mat::Zero(cp.m, cp.n);
  cp.b = Vec::Zero(cp.m);
  for (Index k = 0; k < cp.m; ++k) {
    const LinExpr& e = p.equalities()[static_cast<std::size_t>(k)];
    cp.b(k) = -e.constant();
    for (const auto& [v, a] : e.terms()) cp.a(k, static_cast<Index>(v)) += a;
  }

  Index offset = 0;
  std::vector<Index> local(static_cast<std::size_t>(cp.n), -1);
  for (const auto& cone : p.cones()) {
    const MatExpr& me = cone.expr;
    Block blk;
    blk.dim = static_cast<Index>(me.dim());
    blk.size = blk.dim * blk.dim;
    blk.offset = offset;
    offset += blk.size;
    for (const auto& t : me.terms()) {
      auto& slot = local[t.var];
      if (slot < 0) {
        slot = static_cast<Index>(blk.cols.size());
        blk.cols.push_back(static_cast<Index>(t.var));
      }
    }
    blk.g = Mat::Zero(blk.size, static_cast<Index>(blk.cols.size()));
    for (const auto& t : me.terms()) {
      const Index col = local[t.var];
      for (const auto& e : t.entries) {
        const auto r = static_cast<Index>(e.row);
        const auto c = static_cast<Index>(e.col);
        if (r == c) {
          blk.g(r, col) -= e.value.real();
        } else {
          const Index q = pair_offset(blk.dim, r, c);
          blk.g(q, col) -= kSqrt2 * e.value.real();
          blk.g(q + 1, col) -= kSqrt2 * e.value.imag();
        }
      }
    }
    for (Index v : blk.cols) local[static_cast<std::size_t>(v)] = -1;
    cp.nu += static_cast<double>(blk.dim);
    cp.blocks.push_back(std::move(blk));
  }
  cp.ns = offset;
  cp.h = Vec::Zero(cp.ns);
  for (std::size_t j = 0; j < cp.blocks.size(); ++j) {
    svec(p.cones()[j].expr.constant(), cp.h.data() + cp.blocks[j].offset);
  }
  return cp;
}

class Engine {
 public:
  Engine(Compiled& cp, const Options& opts) : cp_(cp), opts_(opts) {
    if (cp_.m > 0) at_a_ = cp_.a.transpose() * cp_.a;
  }

  Vec g_times(const Vec& x) const {
    Vec out(cp_.ns);
    for (const auto& blk : cp_.blocks) {
      Vec xc(static_cast<Index>(blk.cols.size()));
      for (std::size_t i = 0; i < blk.cols.size(); ++i) xc(static_cast<Index>(i)) = x(blk.cols[i]);
      out.segment(blk.offset, blk.size).noalias() = blk.g * xc;
    }
    return out;
  }

  Vec gt_times(const Vec& z) const {
    Vec out = Vec::Zero(cp_.n);
    for (const auto& blk : cp_.blocks) {
      const Vec part = blk.g.transpose() * z.segment(blk.offset, blk.size);
      for (std::size_t i = 0; i < blk.cols.size(); ++i) out(blk.cols[i]) += part(static_cast<Index>(i));
    }
    return out;
  }

  ComplexMatrix block_mat(const Vec& v, const Block& blk) const { return smat(v.data() + blk.offset, blk.dim); }

  // Congruence of every block: out_j = left_j^H V_j left_j (or its variants).
  template <typename F>
  Vec map_blocks(const Vec& v, F&& f) const {
    Vec out(cp_.ns);
    for (const auto& blk : cp_.blocks) svec(f(blk, block_mat(v, blk)), out.data() + blk.offset);
    return out;
  }

  // W^T v = r v r^H.
  Vec wt_apply(const Vec& v) const {
    return map_blocks(v, [](const Block& b, const ComplexMatrix& m) -> ComplexMatrix { return b.r * m * b.r.adjoint(); });
  }

  // W^{-T} u = rti^H u rti.
  Vec wit_apply(const Vec& u) const {
    return map_blocks(u, [](const Block& b, const ComplexMatrix& m) -> ComplexMatrix { return b.rti.adjoint() * m * b.rti; });
  }

  // W^{-1} v = rti v rti^H.
  Vec wi_apply(const Vec& v) const {
    return map_blocks(v, [](const Block& b, const ComplexMatrix& m) -> ComplexMatrix { return b.rti * m * b.rti.adjoint(); });
  }

  Vec h_inv_apply(const Vec& u) const {
    return map_blocks(u, [](const Block& b, const ComplexMatrix& m) -> ComplexMatrix { return b.tt * m * b.tt; });
  }

  void set_identity_scaling() {
    for (auto& blk : cp_.blocks) {
      blk.r = ComplexMatrix::Identity(blk.dim, blk.dim);
      blk.rti = blk.r;
      blk.tt = blk.r;
      blk.lambda = Vec::Ones(blk.dim);
    }
  }

  bool update_scaling(const Vec& s, const Vec& z) {
    for (auto& blk : cp_.blocks) {
      Eigen::LLT<ComplexMatrix> ls(block_mat(s, blk));
      Eigen::LLT<ComplexMatrix> lz(block_mat(z, blk));
      if (ls.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
      const ComplexMatrix l_s = ls.matrixL();
      const ComplexMatrix l_z = lz.matrixL();
      Eigen::JacobiSVD<ComplexMatrix> svd(l_z.adjoint() * l_s, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const Vec sv = svd.singularValues();
      if (!(sv.minCoeff() > 0.0)) return false;
      const Vec inv_sqrt = sv.cwiseSqrt().cwiseInverse();
      blk.r = l_s * svd.matrixV() * inv_sqrt.asDiagonal();
      blk.rti = l_z * svd.matrixU() * inv_sqrt.asDiagonal();
      blk.tt = blk.rti * blk.rti.adjoint();
      blk.lambda = sv;
    }
    return true;
  }

  bool factor() {
    Mat p = Mat::Zero(cp_.n, cp_.n);
    if (cp_.m > 0) p = at_a_;
    for (const auto& blk : cp_.blocks) {
      const auto k = static_cast<Index>(blk.cols.size());
      Mat gs(blk.size, k);
      for (Index i = 0; i < k; ++i) {
        const ComplexMatrix col = smat(blk.g.col(i).data(), blk.dim);
        svec(blk.rti.adjoint() * col * blk.rti, gs.col(i).data());
      }
      const Mat local = gs.transpose() * gs;
      for (Index i = 0; i < k; ++i) {
        for (Index j = 0; j < k; ++j) p(blk.cols[static_cast<std::size_t>(i)], blk.cols[static_cast<std::size_t>(j)]) += local(i, j);
      }
    }
    if (!regularized_llt(p, llt_p_)) return false;
    if (cp_.m > 0) {
      pinv_at_ = llt_p_.solve(cp_.a.transpose());
      Mat s = cp_.a * pinv_at_;
      if (!regularized_llt(s, llt_s_)) return false;
    }
    return true;
  }

  // Solves  A'y + G'z = r1,  Ax = r2,  Gx - W^T W z = r3  and returns the
  // scaled multiplier zs = W z.
  void kkt_solve(const Vec& r1, const Vec& r2, const Vec& r3, Vec& x, Vec& y, Vec& zs) const {
    kkt_solve_once(r1, r2, r3, x, y, zs);
    for (int it = 0; it < opts_.refinement_steps; ++it) {
      const Vec e1 = r1 - at_times(y) - gt_times(wi_apply(zs));
      const Vec e2 = r2 - a_times(x);
      const Vec e3 = r3 - g_times(x) + wt_apply(zs);
      Vec dx, dy, dz;
      kkt_solve_once(e1, e2, e3, dx, dy, dz);
      x += dx;
      y += dy;
      zs += dz;
    }
  }

  Vec a_times(const Vec& x) const { return cp_.m > 0 ? Vec(cp_.a * x) : Vec(0); }
  Vec at_times(const Vec& y) const { return cp_.m > 0 ? Vec(cp_.a.transpose() * y) : Vec(Vec::Zero(cp_.n)); }

 private:
  static bool regularized_llt(Mat& m, Eigen::LLT<Mat>& llt) {
    llt.compute(m);
    if (llt.info() == Eigen::Success) return true;
    const double scale = std::max(1.0, m.diagonal().cwiseAbs().maxCoeff());
    double delta = 1e-13 * scale;
    for (int attempt = 0; attempt < 12; ++attempt) {
      Mat reg = m;
      reg.diagonal().array() += delta;
      llt.compute(reg);
      if (llt.info() == Eigen::Success) return true;
      delta *= 10.0;
    }
    return false;
  }

  void kkt_solve_once(const Vec& r1, const Vec& r2, const Vec& r3, Vec& x, Vec& y, Vec& zs) const {
    Vec rhs = r1 + gt_times(h_inv_apply(r3));
    if (cp_.m > 0) {
      rhs += cp_.a.transpose() * r2;
      y = llt_s_.solve(cp_.a * llt_p_.solve(rhs) - r2);
      x = llt_p_.solve(rhs - cp_.a.transpose() * y);
    } else {
      y = Vec(0);
      x = llt_p_.solve(rhs);
    }
    zs = wit_apply(g_times(x) - r3);
  }

  Compiled& cp_;
  const Options& opts_;
  Mat at_a_;
  Mat pinv_at_;
  Eigen::LLT<Mat> llt_p_;
  Eigen::LLT<Mat> llt_s_;
};

// Largest alpha with v + alpha * dv in the cone, or +inf.
double block_step(const Vec& dv_scaled, const Block& blk, const Vec& lambda) {
  ComplexMatrix m = smat(dv_scaled.data() + blk.offset, blk.dim);
  for (Index j = 0; j < blk.dim; ++j) {
    for (Index k = 0; k < blk.dim; ++k) m(j, k) /= std::sqrt(lambda(j) * lambda(k));
  }
  const double lmin = min_eig(m);
  if (lmin >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

// Largest t with v + t I outside the cone interior, i.e. -min eigenvalue.
double max_negative_shift(const Vec& v, const Compiled& cp) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& blk : cp.blocks) worst = std::max(worst, -min_eig(smat(v.data() + blk.offset, blk.dim)));
  return worst;
}

void add_identity(Vec& v, const Compiled& cp, double t) {
  for (const auto& blk : cp.blocks) {
    for (Index j = 0; j < blk.dim; ++j) v(blk.offset + j) += t;
  }
}

struct Direction {
  Vec x, y, z, s;
  Vec s_scaled, z_scaled;
  double tau = 0.0;
  double kappa = 0.0;
};

}  // namespace

Solution solve(const Problem& problem, const Options& opts) {
  if (problem.num_variables() == 0) throw DimensionError("solve: problem has no variables");
  if (problem.num_cones() == 0) throw UnsupportedError("solve: problem has no conic constraints");

  Compiled cp = compile(problem);
  Engine eng(cp, opts);

  Solution sol;
  sol.min_weak_duality_slack = std::numeric_limits<double>::infinity();

  const double res_x0 = std::max(1.0, cp.c.norm());
  const double res_y0 = std::max(1.0, cp.b.norm());
  const double res_z0 = std::max(1.0, cp.h.norm());

  // Initial point from two least-squares solves with identity scaling.
  eng.set_identity_scaling();
  if (!eng.factor()) {
    sol.message = "initial KKT factorization failed";
    sol.x = Vec::Zero(cp.n);
    sol.eq_multipliers = Vec::Zero(cp.m);
    for (const auto& blk : cp.blocks) sol.cone_multipliers.push_back(HermitianOperator::zero(static_cast<std::size_t>(blk.dim)));
    return sol;
  }
  Vec x, y, z, s;
  {
    Vec ytmp, ztmp, xtmp;
    eng.kkt_solve(Vec::Zero(cp.n), cp.b, cp.h, x, ytmp, ztmp);
    s = -ztmp;
    eng.kkt_solve(-cp.c, Vec::Zero(cp.m), Vec::Zero(cp.ns), xtmp, y, z);
    const double ts = max_negative_shift(s, cp);
    const double tz = max_negative_shift(z, cp);
    if (ts >= -1e-8 * std::max(1.0, s.norm())) add_identity(s, cp, 1.0 + ts);
    if (tz >= -1e-8 * std::max(1.0, z.norm())) add_identity(z, cp, 1.0 + tz);
  }
  double tau = 1.0;
  double kappa = 1.0;

  Status status = Status::NumericalFailure;
  std::string message = "iteration limit reached";
  int iter = 0;
  double pres = 0.0, dres = 0.0, gap = 0.0;
  double last_pcost = 0.0, last_dcost = 0.0;

  for (;; ++iter) {
    const Vec rx = eng.at_times(y) + eng.gt_times(z) + cp.c * tau;
    const Vec ry = eng.a_times(x) - cp.b * tau;
    const Vec rz = eng.g_times(x) + s - cp.h * tau;
    const double cx = cp.c.dot(x);
    const double by = cp.m > 0 ? cp.b.dot(y) : 0.0;
    const double hz = cp.h.dot(z);
    const double rt = kappa + cx + by + hz;
    const double sz = s.dot(z);
    const double mu = (sz + tau * kappa) / (cp.nu + 1.0);

    const double pcost = cx / tau + cp.c0;
    const double dcost = (-by - hz) / tau + cp.c0;
    pres = std::max(ry.norm() / tau / res_y0, rz.norm() / tau / res_z0);
    dres = rx.norm() / tau / res_x0;
    gap = sz / (tau * tau);
    last_pcost = pcost;
    last_dcost = dcost;

    IterationInfo info;
    info.iteration = iter;
    info.primal_cost = pcost;
    info.dual_cost = dcost;
    info.primal_residual = pres;
    info.dual_residual = dres;
    info.complementarity = gap;
    info.tau = tau;
    info.kappa = kappa;

    if (opts.check_weak_duality) {
      const double explained = (x.dot(rx) - y.dot(ry) - z.dot(rz)) / (tau * tau);
      const double slack = pcost - dcost - explained;
      info.weak_duality_slack = slack;
      sol.min_weak_duality_slack = std::min(sol.min_weak_duality_slack, slack);
      const double scale = 1.0 + std::abs(pcost) + std::abs(dcost) + std::abs(explained);
      if (slack < -1e-9 * scale || std::abs(slack - gap) > 1e-7 * (scale + gap)) {
        throw NumericalError("solve: weak duality violated at iteration " + std::to_string(iter));
      }
    }
    if (opts.monitor) opts.monitor(info);

    const double tol_scale = 1.0 + std::abs(pcost);
    if (pres <= opts.feas_tol && dres <= opts.feas_tol && gap <= opts.gap_tol * tol_scale &&
        std::abs(pcost - dcost) <= opts.gap_tol * tol_scale) {
      status = Status::Optimal;
      message = "optimal";
      break;
    }
    if (by + hz < 0.0 && kappa > tau) {
      const double res = (eng.at_times(y) + eng.gt_times(z)).norm() / res_x0 / (-(by + hz));
      if (res <= opts.feas_tol) {
        status = Status::Infeasible;
        message = "primal infeasible";
        break;
      }
    }
    if (cx < 0.0 && kappa > tau) {
      const double res = std::max(eng.a_times(x).norm() / res_y0, (eng.g_times(x) + s).norm() / res_z0) / (-cx);
      if (res <= opts.feas_tol) {
        status = Status::Unbounded;
        message = "dual infeasible (unbounded)";
        break;
      }
    }
    if (iter >= opts.max_iter) break;

    if (!eng.update_scaling(s, z)) {
      message = "iterate left the cone interior";
      break;
    }
    if (!eng.factor()) {
      message = "KKT factorization failed";
      break;
    }

    Vec x1, y1, zs1;
    eng.kkt_solve(-cp.c, cp.b, cp.h, x1, y1, zs1);
    const Vec z1 = eng.wi_apply(zs1);
    const double denom1 = cp.c.dot(x1) + (cp.m > 0 ? cp.b.dot(y1) : 0.0) + cp.h.dot(z1) - kappa / tau;

    // rc: per-block scaled complementarity target. Returns the full direction.
    auto direction = [&](double eta, const std::vector<ComplexMatrix>& rc, double rkappa) {
      Direction d;
      Vec v(cp.ns);
      for (std::size_t j = 0; j < cp.blocks.size(); ++j) {
        const Block& blk = cp.blocks[j];
        ComplexMatrix m = rc[j];
        for (Index a = 0; a < blk.dim; ++a) {
          for (Index b = 0; b < blk.dim; ++b) m(a, b) *= 2.0 / (blk.lambda(a) + blk.lambda(b));
        }
        svec(m, v.data() + blk.offset);
      }
      Vec x2, y2, zs2;
      eng.kkt_solve(-eta * rx, -eta * ry, -eta * rz - eng.wt_apply(v), x2, y2, zs2);
      const Vec z2 = eng.wi_apply(zs2);
      const double dtau_num = -eta * rt - rkappa / tau - cp.c.dot(x2) - (cp.m > 0 ? cp.b.dot(y2) : 0.0) - cp.h.dot(z2);
      d.tau = dtau_num / denom1;
      d.x = x2 + d.tau * x1;
      d.y = y2 + d.tau * y1;
      d.z = z2 + d.tau * z1;
      d.z_scaled = zs2 + d.tau * zs1;
      d.s_scaled = v - d.z_scaled;
      d.s = eng.wt_apply(d.s_scaled);
      d.kappa = (rkappa - kappa * d.tau) / tau;
      return d;
    };

    auto max_step = [&](const Direction& d) {
      double alpha = std::numeric_limits<double>::infinity();
      for (const auto& blk : cp.blocks) {
        alpha = std::min(alpha, block_step(d.s_scaled, blk, blk.lambda));
        alpha = std::min(alpha, block_step(d.z_scaled, blk, blk.lambda));
      }
      if (d.tau < 0.0) alpha = std::min(alpha, -tau / d.tau);
      if (d.kappa < 0.0) alpha = std::min(alpha, -kappa / d.kappa);
      return alpha;
    };

    // Predictor.
    std::vector<ComplexMatrix> rc(cp.blocks.size());
    for (std::size_t j = 0; j < cp.blocks.size(); ++j) {
      const Block& blk = cp.blocks[j];
      rc[j] = ComplexMatrix::Zero(blk.dim, blk.dim);
      rc[j].diagonal() = (-blk.lambda.array().square()).matrix().cast<Complex>();
    }
    const Direction aff = direction(1.0, rc, -tau * kappa);
    const double alpha_aff = std::min(1.0, max_step(aff));
    const double sigma = std::pow(1.0 - alpha_aff, 3);

    // Corrector.
    for (std::size_t j = 0; j < cp.blocks.size(); ++j) {
      const Block& blk = cp.blocks[j];
      const ComplexMatrix ds = eng.block_mat(aff.s_scaled, blk);
      const ComplexMatrix dz = eng.block_mat(aff.z_scaled, blk);
      rc[j] -= 0.5 * (ds * dz + dz * ds);
      rc[j].diagonal().array() += sigma * mu;
    }
    const Direction dir = direction(1.0 - sigma, rc, -tau * kappa - aff.tau * aff.kappa + sigma * mu);
    const double alpha = std::min(1.0, opts.step_fraction * max_step(dir));
    info.step = alpha;
    info.sigma = sigma;
    if (!(alpha > 1e-12)) {
      message = "step length collapsed";
      break;
    }

    x += alpha * dir.x;
    y += alpha * dir.y;
    z += alpha * dir.z;
    s += alpha * dir.s;
    tau += alpha * dir.tau;
    kappa += alpha * dir.kappa;
  }

  if (status == Status::NumericalFailure && opts.reduced_accuracy_factor > 0.0) {
    const double f = opts.reduced_accuracy_factor;
    const double tol_scale = 1.0 + std::abs(last_pcost);
    if (pres <= f * opts.feas_tol && dres <= f * opts.feas_tol && gap <= f * opts.gap_tol * tol_scale &&
        std::abs(last_pcost - last_dcost) <= f * opts.gap_tol * tol_scale) {
      status = Status::Optimal;
      message = "optimal (reduced accuracy; " + message + ")";
    }
  }

  sol.status = status;
  sol.message = message;
  sol.iterations = iter;
  sol.primal_residual = pres;
  sol.dual_residual = dres;
  sol.complementarity = gap;
  if (!opts.check_weak_duality) sol.min_weak_duality_slack = 0.0;

  double xscale = 1.0 / tau;
  double yscale = 1.0 / tau;
  if (status == Status::Infeasible) {
    yscale = 1.0 / (-(cp.m > 0 ? cp.b.dot(y) : 0.0) - cp.h.dot(z));
    xscale = 0.0;
  } else if (status == Status::Unbounded) {
    xscale = 1.0 / (-cp.c.dot(x));
    yscale = 0.0;
  }
  sol.x = x * xscale;
  sol.eq_multipliers = y * yscale;
  for (const auto& blk : cp.blocks) {
    sol.cone_multipliers.emplace_back(smat(z.data() + blk.offset, blk.dim) * yscale);
  }
  if (status == Status::Infeasible || status == Status::Unbounded) {
    sol.primal_value = status == Status::Infeasible ? std::numeric_limits<double>::infinity()
                                                    : -std::numeric_limits<double>::infinity();
    sol.dual_value = sol.primal_value;
  } else {
    sol.primal_value = cp.c.dot(sol.x) + cp.c0;
    sol.dual_value = -(cp.m > 0 ? cp.b.dot(sol.eq_multipliers) : 0.0) - cp.h.dot(z / tau) + cp.c0;
  }
  return sol;
}

}  // namespace povmforge::sdp
