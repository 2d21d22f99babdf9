// Copyright 2026 Blochfar Developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied. See the License for the specific language governing
// permissions and limitations under the License.

#include "blochfar/fem.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <string>
#include <cmath>
#include <limits>
#include <map>

namespace blochfar {

CellMatrices assemble_cell_matrices(const CellMesh& mesh) {
  mesh.validate();
  const int n = static_cast<int>(mesh.nodes.size());
  CellMatrices c;
  c.K0 = Eigen::MatrixXd::Zero(n, n);
  c.M0 = Eigen::MatrixXd::Zero(n, n);
  for (const auto& t : mesh.triangles) {
    const Vec2& p0 = mesh.nodes[t[0]];
    const Vec2& p1 = mesh.nodes[t[1]];
    const Vec2& p2 = mesh.nodes[t[2]];
    const double b[3] = {p1[1] - p2[1], p2[1] - p0[1], p0[1] - p1[1]};
    const double cc[3] = {p2[0] - p1[0], p0[0] - p2[0], p1[0] - p0[0]};
    const double area = 0.5 * (cc[2] * b[1] - cc[1] * b[2]);
    if (!(area > 1e-14)) fail(ErrorCode::kDegenerateTriangle, "non-positive area");
    for (int a = 0; a < 3; ++a) {
      for (int e = 0; e < 3; ++e) {
        c.K0(t[a], t[e]) += (b[a] * b[e] + cc[a] * cc[e]) / (4.0 * area);
        c.M0(t[a], t[e]) += area * (a == e ? 2.0 : 1.0) / 12.0;
      }
    }
  }
  c.M_lumped = c.M0.rowwise().sum();
  return c;
}

BlochOperator::BlochOperator(const CellMesh& mesh, bool lumped_mass)
    : mesh_(mesh), cell_(assemble_cell_matrices(mesh)), lumped_(lumped_mass) {
  const int n = static_cast<int>(mesh.nodes.size());
  red_of_.assign(n, -1);
  shift_.assign(n, {0, 0});
  for (int a = 0; a < n; ++a) {
    switch (mesh.tags[a]) {
      case NodeTag::kInner:
      case NodeTag::kHole:
      case NodeTag::kLeft:
      case NodeTag::kBottom:
      case NodeTag::kC1:
        red_of_[a] = n_red_++;
        full_of_red_.push_back(a);
        break;
      default:
        break;
    }
  }
  int c1 = -1;
  for (int a = 0; a < n; ++a) {
    if (mesh.tags[a] == NodeTag::kC1) c1 = a;
  }
  for (auto [l, r] : mesh.left_right) {
    red_of_[r] = red_of_[l];
    shift_[r] = {1, 0};
  }
  for (auto [b, u] : mesh.bottom_upper) {
    red_of_[u] = red_of_[b];
    shift_[u] = {0, 1};
  }
  for (int a = 0; a < n; ++a) {
    switch (mesh.tags[a]) {
      case NodeTag::kC4: red_of_[a] = red_of_[c1]; shift_[a] = {1, 0}; break;
      case NodeTag::kC2: red_of_[a] = red_of_[c1]; shift_[a] = {0, 1}; break;
      case NodeTag::kC3: red_of_[a] = red_of_[c1]; shift_[a] = {1, 1}; break;
      default: break;
    }
  }
  int expected = n - static_cast<int>(mesh.left_right.size()) -
                 static_cast<int>(mesh.bottom_upper.size()) - 3;
  for (int a = 0; a < n; ++a) {
    if (red_of_[a] < 0) fail(ErrorCode::kBlockMismatch, "node left unreduced");
  }
  if (expected != n_red_) {
    fail(ErrorCode::kBlockMismatch, "reduced size differs from the tag count");
  }
  // Entry (a, b) of A lands at (red a, red b) with factor
  // exp(i p_a . xi) exp(-i p_b . xi).
  auto make = [&](const Eigen::MatrixXd& A) {
    std::map<std::array<int, 4>, double> acc;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (A(a, b) == 0.0) continue;
        acc[{red_of_[a], red_of_[b], shift_[a][0] - shift_[b][0],
             shift_[a][1] - shift_[b][1]}] += A(a, b);
      }
    }
    std::vector<TemplateEntry> out;
    out.reserve(acc.size());
    for (const auto& [key, v] : acc) {
      if (v != 0.0) out.push_back({key[0], key[1], v, key[2], key[3]});
    }
    return out;
  };
  k_tpl_ = make(cell_.K0);
  if (lumped_) {
    m_tpl_ = make(Eigen::MatrixXd(cell_.M_lumped.asDiagonal()));
  } else {
    m_tpl_ = make(cell_.M0);
  }
}

Eigen::MatrixXcd BlochOperator::build(const std::vector<TemplateEntry>& tpl,
                                      const Vec2& xi, int deriv) const {
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n_red_, n_red_);
  for (const auto& e : tpl) {
    const double ph = e.dp1 * xi[0] + e.dp2 * xi[1];
    cplx v = e.val * std::exp(kI * ph);
    if (deriv == 0) v *= kI * static_cast<double>(e.dp1);
    if (deriv == 1) v *= kI * static_cast<double>(e.dp2);
    A(e.row, e.col) += v;
  }
  return A;
}

Eigen::MatrixXcd BlochOperator::K(const Vec2& xi) const { return build(k_tpl_, xi, -1); }
Eigen::MatrixXcd BlochOperator::M(const Vec2& xi) const { return build(m_tpl_, xi, -1); }

Eigen::MatrixXcd BlochOperator::dK(int i, const Vec2& xi) const {
  if (i != 0 && i != 1) fail(ErrorCode::kInvalidArgument, "derivative index");
  return build(k_tpl_, xi, i);
}

Eigen::MatrixXcd BlochOperator::reduce_dense(const Eigen::MatrixXd& A,
                                             const Vec2& xi) const {
  const int n = full_size();
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(n, n_red_);
  for (int a = 0; a < n; ++a) {
    P(a, red_of_[a]) = std::exp(-kI * (shift_[a][0] * xi[0] + shift_[a][1] * xi[1]));
  }
  return P.adjoint() * A.cast<cplx>() * P;
}

BlochEigen solve_bloch_eigen(const BlochOperator& op, const Vec2& xi, int n_bands) {
  const int n = op.reduced_size();
  if (n_bands < 1 || n_bands > n) fail(ErrorCode::kInvalidArgument, "band count");
  const Eigen::MatrixXcd K = op.K(xi);
  const Eigen::MatrixXcd M = op.M(xi);
  BlochEigen out;
  Eigen::MatrixXcd V;
  Eigen::VectorXd lam;
  if (op.lumped()) {
    const Eigen::VectorXd s = M.diagonal().real().cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXcd S = s.asDiagonal() * K * s.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S);
    if (es.info() != Eigen::Success) fail(ErrorCode::kSolverFailure, "eigensolver");
    lam = es.eigenvalues();
    V = s.asDiagonal() * es.eigenvectors();
  } else {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> es(K, M);
    if (es.info() != Eigen::Success) fail(ErrorCode::kSolverFailure, "eigensolver");
    lam = es.eigenvalues();
    V = es.eigenvectors();
  }
  if (!lam.allFinite()) fail(ErrorCode::kSolverFailure, "non-finite eigenvalues");
  out.lambda = lam.head(n_bands);
  out.V = V.leftCols(n_bands);
  for (int j = 0; j < n_bands; ++j) {
    Eigen::Index imax = 0;
    out.V.col(j).cwiseAbs().maxCoeff(&imax);
    const cplx v = out.V(imax, j);
    out.V.col(j) *= std::conj(v) / std::abs(v);
  }
  return out;
}

namespace {

double rel_gap(const BlochOperator& op, int band, const Vec2& xi) {
  const BlochEigen e = solve_bloch_eigen(op, xi, band + 2);
  return (e.lambda[band + 1] - e.lambda[band]) / std::abs(e.lambda[band]);
}

}  // namespace

DoublePoint find_double_eigenvalue(const BlochOperator& op, int band,
                                   const Vec2& lo, const Vec2& hi,
                                   const DoublePointOptions& opt) {
  if (band < 0 || band + 2 > op.reduced_size()) {
    fail(ErrorCode::kInvalidArgument, "band index out of range");
  }
  if (!(hi[0] > lo[0] && hi[1] > lo[1]) || opt.coarse < 2) {
    fail(ErrorCode::kInvalidArgument, "empty search box");
  }
  Vec2 best = lo;
  double fbest = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= opt.coarse; ++i) {
    for (int j = 0; j <= opt.coarse; ++j) {
      const Vec2 x{lo[0] + (hi[0] - lo[0]) * i / opt.coarse,
                   lo[1] + (hi[1] - lo[1]) * j / opt.coarse};
      const double f = rel_gap(op, band, x);
      if (f < fbest) {
        fbest = f;
        best = x;
      }
    }
  }
  // Nelder-Mead on the gap; the cone is a kink so simplex methods suit it.
  const double step = 0.5 * std::max((hi[0] - lo[0]), (hi[1] - lo[1])) / opt.coarse;
  std::array<Vec2, 3> s = {best, Vec2{best[0] + step, best[1]},
                           Vec2{best[0], best[1] + step}};
  std::array<double, 3> f = {fbest, rel_gap(op, band, s[1]), rel_gap(op, band, s[2])};
  for (int it = 0; it < opt.max_iter; ++it) {
    std::array<int, 3> o = {0, 1, 2};
    std::sort(o.begin(), o.end(), [&](int a, int b) { return f[a] < f[b]; });
    s = {s[o[0]], s[o[1]], s[o[2]]};
    f = {f[o[0]], f[o[1]], f[o[2]]};
    if (f[0] < 0.01 * opt.gap_tol) break;
    const double size = std::max(std::hypot(s[1][0] - s[0][0], s[1][1] - s[0][1]),
                                 std::hypot(s[2][0] - s[0][0], s[2][1] - s[0][1]));
    if (size < 1e-14) break;
    const Vec2 c{0.5 * (s[0][0] + s[1][0]), 0.5 * (s[0][1] + s[1][1])};
    auto along = [&](double t) {
      return Vec2{c[0] + t * (s[2][0] - c[0]), c[1] + t * (s[2][1] - c[1])};
    };
    const Vec2 xr = along(-1.0);
    const double fr = rel_gap(op, band, xr);
    if (fr < f[0]) {
      const Vec2 xe = along(-2.0);
      const double fe = rel_gap(op, band, xe);
      if (fe < fr) { s[2] = xe; f[2] = fe; } else { s[2] = xr; f[2] = fr; }
    } else if (fr < f[1]) {
      s[2] = xr;
      f[2] = fr;
    } else {
      const Vec2 xc = fr < f[2] ? along(-0.5) : along(0.5);
      const double fc = rel_gap(op, band, xc);
      if (fc < std::min(fr, f[2])) {
        s[2] = xc;
        f[2] = fc;
      } else {
        for (int q = 1; q < 3; ++q) {
          s[q] = {0.5 * (s[0][0] + s[q][0]), 0.5 * (s[0][1] + s[q][1])};
          f[q] = rel_gap(op, band, s[q]);
        }
      }
    }
  }
  int ib = 0;
  for (int q = 1; q < 3; ++q) {
    if (f[q] < f[ib]) ib = q;
  }
  DoublePoint dp;
  dp.xi = s[ib];
  dp.band = band;
  dp.rel_gap = f[ib];
  if (!(dp.rel_gap < opt.gap_tol)) {
    fail(ErrorCode::kNoDoublePoint,
         "smallest relative gap " + std::to_string(dp.rel_gap) + " in the box");
  }
  const BlochEigen e = solve_bloch_eigen(op, dp.xi, band + 2);
  dp.lambda = 0.5 * (e.lambda[band] + e.lambda[band + 1]);
  dp.k = std::sqrt(dp.lambda);
  dp.V = e.V.middleCols(band, 2);
  return dp;
}

SpectralModel fem_band_model(const BlochOperator& op, int band) {
  if (band < 0 || band >= op.reduced_size()) {
    fail(ErrorCode::kInvalidArgument, "band index out of range");
  }
  const BlochOperator* p = &op;
  DefiningFunction df;
  df.g = [p, band](const BlochPoint& x, const Wavenumber& kk) -> cplx {
    const BlochEigen e = solve_bloch_eigen(*p, {x.xi1.real(), x.xi2.real()}, band + 1);
    return kk.value() * kk.value() - e.lambda[band];
  };
  df.grad = [p, band](const BlochPoint& x, const Wavenumber&) -> CVec2 {
    const Vec2 xi{x.xi1.real(), x.xi2.real()};
    const BlochEigen e = solve_bloch_eigen(*p, xi, band + 1);
    const Eigen::VectorXcd v = e.V.col(band);
    CVec2 g;
    for (int i = 0; i < 2; ++i) g[i] = -v.dot(p->dK(i, xi) * v).real();
    return g;
  };
  df.dg_dk = [](const Vec2&, double k) { return 2.0 * k; };
  SpectralModel m;
  m.defining_functions.push_back(std::move(df));
  m.periodic = true;
  m.name = "fem-band-" + std::to_string(band);
  m.evaluate = [p, band](const BlochPoint& x, const Wavenumber& kk) -> cplx {
    const BlochEigen e = solve_bloch_eigen(*p, {x.xi1.real(), x.xi2.real()}, band + 1);
    return 1.0 / (kk.value() * kk.value() - e.lambda[band]);
  };
  return m;
}

}  // namespace blochfar
