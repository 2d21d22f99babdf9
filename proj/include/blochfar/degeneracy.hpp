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

#include <array>

#include "blochfar/plane_oracle.hpp"
#include "blochfar/special.hpp"

namespace blochfar {

struct CanonicalRegime {
  double khat = 0.0;   // k - k*
  double kstar = 1.0;
  double Lambda = 1.0;
  Vec2 alpha_tilde{};  // alpha / N
  int N = 1;
  Vec2 alpha() const { return {alpha_tilde[0] * N, alpha_tilde[1] * N}; }
  void validate() const;
};

enum class ExtremumKind { kMax, kMin };

// (1/2k*) Int Lambda e^{-i alpha.zeta} / (Lambda khat +- |zeta|^2) dzeta
// with + for a maximum and - for a minimum, khat -> khat + i0.
cplx canonical_extremum(const CanonicalRegime& r, ExtremumKind kind);

// (1/2k*) Int e^{-i alpha.zeta} / (khat - zeta1 zeta2) dzeta. Both signs of
// khat are supported.
cplx canonical_hyperbolic(const CanonicalRegime& r);

struct DiracTriple {
  cplx J0, J1, J2;
  // True when the rho -> 0 limits were returned (J0 then holds rho*J0 = 0).
  bool asymptotic = false;
};

// J0 = Int e^{-i alpha.zeta}/(|zeta|^2 - rho^2), J_j with zeta_j on top.
DiracTriple dirac_canonical_triple(const Vec2& alpha, double rho,
                                   int khat_sign);
DiracTriple dirac_triple_limit(const Vec2& alpha);

struct DiracLocalModel {
  double q1 = 0.0, q3 = 0.0;
  cplx q2{}, q4{};
  double rho = 0.0;
  Mat2 Psi_star{};
  Vec2 xi_star{};
  cplx Vl1_src{}, Vl2_src{}, Vl1_obs{}, Vl2_obs{};
  void validate(double tol = 1e-8) const;
};

// I_mk combinations of the J-triple.
std::array<std::array<cplx, 2>, 2> dirac_I_matrix(const DiracLocalModel& m,
                                                  const DiracTriple& J);

cplx dirac_farfield(const DiracLocalModel& model, const LatticeIndex& m);

cplx resonance_time_integral(const Vec2& alpha, double c, double t);
// Closed form extended to any quadrant (alpha1 alpha2 != 0).
cplx resonance_time_integral_any(const Vec2& alpha, double c, double t);
// 2 pi i Int_0^{ct} e^{i alpha1 alpha2 / s} ds / s by rotated-ray quadrature.
cplx resonance_time_oracle(const Vec2& alpha, double c, double t);

// Brute-force deformed-plane counterparts of the closed forms.
cplx canonical_extremum_oracle(const CanonicalRegime& r, ExtremumKind kind,
                               const PlaneOracleOptions& opt = {});
cplx canonical_hyperbolic_oracle(const CanonicalRegime& r,
                                 const PlaneOracleOptions& opt = {6.0, 0.008,
                                                                  0.15, 0.1});
DiracTriple dirac_triple_oracle(const Vec2& alpha, double rho,
                                const PlaneOracleOptions& opt = {});

}  // namespace blochfar
