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

#include "blochfar/spectral.hpp"

#include <cmath>

namespace blochfar {

double wrap_angle(double x) {
  double y = std::remainder(x, 2.0 * kPi);
  if (y <= -kPi) y += 2.0 * kPi;
  return y;
}

BlochPoint wrap(const BlochPoint& p) {
  return {cplx(wrap_angle(p.xi1.real()), p.xi1.imag()),
          cplx(wrap_angle(p.xi2.real()), p.xi2.imag())};
}

bool is_finite(const BlochPoint& p) {
  return std::isfinite(p.xi1.real()) && std::isfinite(p.xi1.imag()) &&
         std::isfinite(p.xi2.real()) && std::isfinite(p.xi2.imag());
}

double LatticeIndex::norm() const {
  return std::hypot(static_cast<double>(m1), static_cast<double>(m2));
}

cplx lattice_denominator(const BlochPoint& xi, const Wavenumber& kk) {
  const cplx w = kk.value();
  return 2.0 * std::cos(xi.xi1) + 2.0 * std::cos(xi.xi2) + w * w - 4.0;
}

cplx lattice_spectral_value(const BlochPoint& xi, const Wavenumber& kk,
                            double tol) {
  const cplx w = kk.value();
  const cplx c1 = 2.0 * std::cos(xi.xi1);
  const cplx c2 = 2.0 * std::cos(xi.xi2);
  const cplx den = c1 + c2 + w * w - 4.0;
  const double scale =
      std::max(1.0, std::abs(c1) + std::abs(c2) + std::abs(w * w) + 4.0);
  if (std::abs(den) < tol * scale) {
    fail(ErrorCode::kSingularEvaluation, "point lies on the polar set");
  }
  return 1.0 / den;
}

GradientValue lattice_defining_gradient(const BlochPoint& xi,
                                        const Wavenumber& kk) {
  return {lattice_denominator(xi, kk),
          {-2.0 * std::sin(xi.xi1), -2.0 * std::sin(xi.xi2)}};
}

double lattice_eigenvalue(const Vec2& xi) {
  return 4.0 - 2.0 * std::cos(xi[0]) - 2.0 * std::cos(xi[1]);
}

cplx eigen_expansion_value(const std::vector<EigenTerm>& terms, const Vec2& xi,
                           const Wavenumber& kk, double tol) {
  const cplx w = kk.value();
  cplx sum = 0.0;
  for (const auto& t : terms) {
    const double lam = t.lambda(xi);
    const cplx den = w * w - lam;
    if (std::abs(den) < tol * std::max(1.0, std::abs(lam))) {
      fail(ErrorCode::kSingularEvaluation, "k^2 equals an eigenvalue");
    }
    sum += t.numerator(xi) / den;
  }
  return sum;
}

SpectralModel lattice_model() {
  SpectralModel m;
  m.name = "lattice";
  m.periodic = true;
  m.degenerate_k = {0.0, 2.0, 2.0 * std::sqrt(2.0)};
  m.evaluate = [](const BlochPoint& xi, const Wavenumber& kk) {
    return lattice_spectral_value(xi, kk);
  };
  DefiningFunction g;
  g.g = [](const BlochPoint& xi, const Wavenumber& kk) {
    return lattice_denominator(xi, kk);
  };
  g.grad = [](const BlochPoint& xi, const Wavenumber& kk) {
    return lattice_defining_gradient(xi, kk).grad;
  };
  g.hessian = [](const Vec2& xi, double) {
    return Mat2{{{-2.0 * std::cos(xi[0]), 0.0}, {0.0, -2.0 * std::cos(xi[1])}}};
  };
  g.dg_dk = [](const Vec2&, double k) { return 2.0 * k; };
  m.defining_functions.push_back(g);
  m.eigen_terms.push_back(
      {[](const Vec2& xi) { return lattice_eigenvalue(xi); },
       [](const Vec2&) { return cplx(1.0); }});
  return m;
}

}  // namespace blochfar
