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
#include <functional>
#include <optional>
#include <vector>

#include "blochfar/core.hpp"

namespace blochfar {

struct BlochPoint {
  cplx xi1{};
  cplx xi2{};
};

// Real parts mapped into [-pi, pi]; imaginary parts untouched.
BlochPoint wrap(const BlochPoint& p);
double wrap_angle(double x);
bool is_finite(const BlochPoint& p);

struct Wavenumber {
  double k = 0.0;
  double kappa = 0.0;
  cplx value() const { return {k, kappa}; }
};

struct LatticeIndex {
  long m1 = 0;
  long m2 = 0;
  double norm() const;
};

using Vec2 = std::array<double, 2>;
using CVec2 = std::array<cplx, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

struct DefiningFunction {
  std::function<cplx(const BlochPoint&, const Wavenumber&)> g;
  std::function<CVec2(const BlochPoint&, const Wavenumber&)> grad;
  // Optional real Hessian at real xi, kappa = 0.
  std::function<Mat2(const Vec2&, double)> hessian;
  // d g / d k at real xi, kappa = 0; sign drives the bypass rule.
  std::function<double(const Vec2&, double)> dg_dk;
};

struct EigenTerm {
  std::function<double(const Vec2&)> lambda;
  std::function<cplx(const Vec2&)> numerator;
};

struct SpectralModel {
  std::function<cplx(const BlochPoint&, const Wavenumber&)> evaluate;
  std::vector<DefiningFunction> defining_functions;
  std::vector<EigenTerm> eigen_terms;
  bool periodic = true;
  // Wavenumbers where traces degenerate; guarded by the geometry routines.
  std::vector<double> degenerate_k;
  std::string name;
};

inline constexpr double kDefaultSingularTol = 1e-14;

cplx lattice_denominator(const BlochPoint& xi, const Wavenumber& kk);
cplx lattice_spectral_value(const BlochPoint& xi, const Wavenumber& kk,
                            double tol = kDefaultSingularTol);

struct GradientValue {
  cplx g;
  CVec2 grad;
};
GradientValue lattice_defining_gradient(const BlochPoint& xi,
                                        const Wavenumber& kk);

double lattice_eigenvalue(const Vec2& xi);

cplx eigen_expansion_value(const std::vector<EigenTerm>& terms, const Vec2& xi,
                           const Wavenumber& kk,
                           double tol = kDefaultSingularTol);

SpectralModel lattice_model();

}  // namespace blochfar
