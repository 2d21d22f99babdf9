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

#include "blochfar/core.hpp"

namespace blochfar {

inline constexpr double kEulerGamma = 0.57721566490153286061;

struct BesselJY {
  double j0, j1, y0, y1;
};

// J0, J1, Y0, Y1 for x > 0.
BesselJY bessel_jy(double x);

double bessel_k0(double x);

struct CylinderValues {
  double K0;
  cplx H0_1, H0_2, H1_1, H1_2;
};

CylinderValues cylinder_functions(double x);

cplx hankel1_0(double x);
cplx hankel2_0(double x);
cplx hankel1_1(double x);
cplx hankel2_1(double x);

// Phi(z) = Int_0^inf e^{i z tau} / (1 + tau) d tau = e^{-iz} E1(-iz).
cplx phi_function(double z);
// Same closed form for any real z != 0.
cplx phi_any(double z);

// Exponential integral E1 for complex w off the negative real axis.
cplx expint_e1(cplx w);

}  // namespace blochfar
