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

#include "blochfar/fem_dirac.hpp"

#include <cmath>

#include "blochfar/degeneracy.hpp"

namespace blochfar {

ConeMatrices compute_Y_matrices(const BlochOperator& op, const DoublePoint& dp) {
  if (dp.V.cols() != 2 || dp.V.rows() != op.reduced_size()) {
    fail(ErrorCode::kInvalidArgument, "double point needs two vectors");
  }
  ConeMatrices y;
  y.Y1 = -(dp.V.adjoint() * op.dK(0, dp.xi) * dp.V);
  y.Y2 = -(dp.V.adjoint() * op.dK(1, dp.xi) * dp.V);
  return y;
}

ConeNormalization normalize_cone(const ConeMatrices& Y) {
  const Eigen::Matrix2cd& A = Y.Y1;
  const Eigen::Matrix2cd& B = Y.Y2;
  ConeNormalization c;
  c.trace_residual = std::max(std::abs(A.trace()) / std::max(A.norm(), 1e-300),
                              std::abs(B.trace()) / std::max(B.norm(), 1e-300));
  c.C1 = -A.determinant().real();
  c.C2 = -B.determinant().real();
  c.C3 = (-A(0, 0) * B(1, 1) - A(1, 1) * B(0, 0) + A(1, 0) * B(0, 1) +
          A(0, 1) * B(1, 0)).real();
  const double disc = 4.0 * c.C1 - c.C3 * c.C3 / c.C2;
  if (!(c.C2 > 0.0) || !(disc > 0.0)) {
    fail(ErrorCode::kNotElliptic, "cone quadratic form is not positive definite");
  }
  const double s = 1.0 / std::sqrt(disc);
  c.Psi = {{{2.0 * s, 0.0}, {-(c.C3 / c.C2) * s, 1.0 / std::sqrt(c.C2)}}};
  c.Yt1 = c.Psi[0][0] * A + c.Psi[1][0] * B;
  c.Yt2 = c.Psi[0][1] * A + c.Psi[1][1] * B;
  c.q1 = c.Yt1(0, 0).real();
  c.q2 = c.Yt1(1, 0);
  c.q3 = c.Yt2(0, 0).real();
  c.q4 = c.Yt2(1, 0);
  return c;
}

double cone_residual(const BlochOperator& op, const DoublePoint& dp,
                     const ConeNormalization& cn, double r, int rays) {
  double worst = 0.0;
  for (int q = 0; q < rays; ++q) {
    const double th = 2.0 * kPi * q / rays;
    const double z1 = r * std::cos(th), z2 = r * std::sin(th);
    const Vec2 xi{dp.xi[0] + cn.Psi[0][0] * z1 + cn.Psi[0][1] * z2,
                  dp.xi[1] + cn.Psi[1][0] * z1 + cn.Psi[1][1] * z2};
    const BlochEigen e = solve_bloch_eigen(op, xi, dp.band + 2);
    const double half = 0.5 * (e.lambda[dp.band + 1] - e.lambda[dp.band]);
    worst = std::max(worst, std::abs(half * half - r * r));
  }
  return worst;
}

DiracCone analyze_cone(const BlochOperator& op, int band, const Vec2& lo,
                       const Vec2& hi, const DoublePointOptions& opt) {
  DiracCone c;
  c.point = find_double_eigenvalue(op, band, lo, hi, opt);
  c.Y = compute_Y_matrices(op, c.point);
  c.norm = normalize_cone(c.Y);
  return c;
}

Eigen::VectorXcd dirac_local_field(const DiracCone& cone, int src, double k,
                                   const LatticeIndex& m) {
  const int n = static_cast<int>(cone.point.V.rows());
  if (src < 0 || src >= n) fail(ErrorCode::kInvalidArgument, "source node index");
  const double dl = cone.point.lambda - k * k;
  if (dl == 0.0) fail(ErrorCode::kAtDegeneracy, "k equals the cone wavenumber");
  const Mat2& P = cone.norm.Psi;
  const double m1 = static_cast<double>(m.m1), m2 = static_cast<double>(m.m2);
  const Vec2 alpha{P[0][0] * m1 + P[1][0] * m2, P[0][1] * m1 + P[1][1] * m2};
  const double rho = -dl;
  const DiracTriple J = dirac_canonical_triple(alpha, rho, rho > 0.0 ? 1 : -1);
  Eigen::Matrix2cd I = cone.norm.Yt1 * J.J1 + cone.norm.Yt2 * J.J2;
  I(0, 0) += dl * J.J0;
  I(1, 1) += dl * J.J0;
  // Projected source, with the sign of the local equation (Y - dl) a = Vt.
  Eigen::Vector2cd vt = -cone.point.V.row(src).adjoint();
  const double det = P[0][0] * P[1][1] - P[0][1] * P[1][0];
  const cplx phase = std::exp(-kI * (m1 * cone.point.xi[0] + m2 * cone.point.xi[1]));
  return (det * phase / (4.0 * kPi * kPi)) * (cone.point.V * (I * vt));
}

}  // namespace blochfar
