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

#pragma once

#include <Eigen/Dense>

#include "blochfar/fem.hpp"

namespace blochfar {

// Y^(i) = -V^H (dK/dxi_i) V over the two degenerate vectors.
struct ConeMatrices {
  Eigen::Matrix2cd Y1, Y2;
};

ConeMatrices compute_Y_matrices(const BlochOperator& op, const DoublePoint& dp);

// Maps delta xi = Psi zeta so that det(zeta1 Yt1 + zeta2 Yt2) = -|zeta|^2.
struct ConeNormalization {
  double C1 = 0.0, C2 = 0.0, C3 = 0.0;
  Mat2 Psi{};
  Eigen::Matrix2cd Yt1, Yt2;
  double q1 = 0.0, q3 = 0.0;
  cplx q2{}, q4{};
  double trace_residual = 0.0;  // max |tr Y_i| relative to ||Y_i||
};

ConeNormalization normalize_cone(const ConeMatrices& Y);

// Largest |(dlambda_band)^2 - |zeta|^2| over rays of radius r in zeta,
// where dlambda_band is half the split of the two bands at xi* + Psi zeta.
double cone_residual(const BlochOperator& op, const DoublePoint& dp,
                     const ConeNormalization& cn, double r, int rays = 16);

struct DiracCone {
  DoublePoint point;
  ConeMatrices Y;
  ConeNormalization norm;
};

DiracCone analyze_cone(const BlochOperator& op, int band, const Vec2& lo,
                       const Vec2& hi, const DoublePointOptions& opt = {});

// Local far field of one cone, at all reduced nodes of cell m, for a unit
// source at reduced node src of cell 0 and wavenumber k (k != k*).
Eigen::VectorXcd dirac_local_field(const DiracCone& cone, int src, double k,
                                   const LatticeIndex& m);

}  // namespace blochfar
