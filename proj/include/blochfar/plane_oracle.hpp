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

#include <functional>
#include <vector>

#include "blochfar/spectral.hpp"

namespace blochfar {

// Brute-force evaluation of Int N(z) e^{-i alpha.z} / prod_j Q_j(z) dz over
// the real plane pushed into C^2 near the zero sets of the Q_j.
struct PlaneFactor {
  std::function<cplx(cplx, cplx)> q;
  std::function<Vec2(double, double)> grad;  // gradient on the real plane
  // +1 pushes along grad Q. Limiting absorption: sign(dQ/dk).
  int sign = 1;
};

struct PlaneOracleOptions {
  double R = 3.0;       // window exp(-(z.z / R^2)^4)
  double h = 0.01;      // trapezoid step
  double delta = 0.05;  // deformation amplitude
  double q0 = 0.02;     // width of the deformation band around Q = 0
  double extent = 1.7;  // half-width of the box in units of R
};

cplx plane_oracle(const std::function<cplx(cplx, cplx)>& numerator,
                  const std::vector<PlaneFactor>& factors, const Vec2& alpha,
                  const PlaneOracleOptions& opt = {});

}  // namespace blochfar
