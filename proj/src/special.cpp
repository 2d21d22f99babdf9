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

#include "blochfar/special.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace blochfar {

namespace {

constexpr double kHankelCrossover = 25.0;

void check_positive(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    fail(ErrorCode::kDomainError, "argument must be positive and finite, got " +
                                      std::to_string(x));
  }
}

// Miller backward recurrence normalized by J0 + 2 sum J_2k = 1, followed
// by the Neumann series for Y0 and Y1.
BesselJY small_argument(double x) {
  int n = static_cast<int>(1.5 * x + 40.0);
  if (n % 2) ++n;
  std::vector<double> j(n + 2, 0.0);
  j[n + 1] = 0.0;
  j[n] = 1e-300;
  for (int k = n; k >= 1; --k) {
    j[k - 1] = 2.0 * k / x * j[k] - j[k + 1];
    if (std::abs(j[k - 1]) > 1e250) {
      for (int q = k - 1; q <= n + 1; ++q) j[q] *= 1e-250;
    }
  }
  double norm = j[0];
  for (int k = 2; k <= n; k += 2) norm += 2.0 * j[k];
  for (auto& v : j) v /= norm;
  const double lg = std::log(0.5 * x) + kEulerGamma;
  double s0 = 0.0, s1 = 0.0;
  for (int k = n / 2 - 1; k >= 1; --k) {
    const double sg = (k % 2) ? -1.0 : 1.0;
    s0 += sg * j[2 * k] / k;
    s1 += sg * (j[2 * k - 1] - j[2 * k + 1]) / k;
  }
  BesselJY r;
  r.j0 = j[0];
  r.j1 = j[1];
  r.y0 = 2.0 / kPi * lg * j[0] - 4.0 / kPi * s0;
  r.y1 = -2.0 / kPi * j[0] / x + 2.0 / kPi * lg * j[1] + 2.0 / kPi * s1;
  return r;
}

// Hankel asymptotic expansion; returns H^(1)_nu(x) for nu = 0, 1.
cplx hankel_asymptotic(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0, q = 0.0;
  double term = 1.0;
  double prev = 1e300;
  for (int k = 1; k < 200; ++k) {
    term *= (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k * x);
    if (std::abs(term) > prev) break;
    prev = std::abs(term);
    // k odd goes to Q, k even to P, with alternating signs in pairs
    const int r = k % 4;
    const double sg = (r == 1 || r == 2) ? 1.0 : -1.0;
    if (k % 2) {
      q += sg * term;
    } else {
      p -= sg * term;
    }
    if (std::abs(term) < 1e-17) break;
  }
  // e^{ix} apart from the fixed shift keeps the phase exact for large x
  const cplx shift = std::exp(-kI * ((0.5 * nu + 0.25) * kPi));
  return std::sqrt(2.0 / (kPi * x)) * cplx(p, q) *
         cplx(std::cos(x), std::sin(x)) * shift;
}

}  // namespace

BesselJY bessel_jy(double x) {
  check_positive(x);
  if (x <= kHankelCrossover) return small_argument(x);
  const cplx h0 = hankel_asymptotic(0, x), h1 = hankel_asymptotic(1, x);
  return {h0.real(), h1.real(), h0.imag(), h1.imag()};
}

double bessel_k0(double x) {
  check_positive(x);
  // K0(x) = e^-x Int_0^inf exp(-x (cosh t - 1)) dt, trapezoid in t.
  // The peak width is ~1/sqrt(x), so the step shrinks with it.
  const double h = 0.05 / std::max(1.0, std::sqrt(x) / 2.0);
  double sum = 0.5;
  for (int i = 1;; ++i) {
    const double v = std::exp(-x * (std::cosh(i * h) - 1.0));
    sum += v;
    if (v < 1e-18 * sum) break;
  }
  return std::exp(-x) * h * sum;
}

CylinderValues cylinder_functions(double x) {
  check_positive(x);
  const BesselJY b = bessel_jy(x);
  return {bessel_k0(x), {b.j0, b.y0}, {b.j0, -b.y0}, {b.j1, b.y1},
          {b.j1, -b.y1}};
}

cplx hankel1_0(double x) {
  const BesselJY b = bessel_jy(x);
  return {b.j0, b.y0};
}
cplx hankel2_0(double x) { return std::conj(hankel1_0(x)); }
cplx hankel1_1(double x) {
  const BesselJY b = bessel_jy(x);
  return {b.j1, b.y1};
}
cplx hankel2_1(double x) { return std::conj(hankel1_1(x)); }

cplx expint_e1(cplx w) {
  if (w.imag() == 0.0 && w.real() <= 0.0) {
    fail(ErrorCode::kDomainError, "E1 on its branch cut");
  }
  if (std::abs(w) <= 2.0) {
    // -gamma - log w - sum (-w)^n / (n n!)
    cplx sum = 0.0, term = 1.0;
    for (int n = 1; n < 200; ++n) {
      term *= -w / static_cast<double>(n);
      const cplx add = term / static_cast<double>(n);
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return -kEulerGamma - std::log(w) - sum;
  }
  // continued fraction, modified Lentz
  const double tiny = 1e-300;
  cplx b = w + 1.0;
  cplx c = 1.0 / tiny;
  cplx d = 1.0 / b;
  cplx h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const cplx del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-w);
}

cplx phi_any(double z) {
  if (z == 0.0 || !std::isfinite(z)) {
    fail(ErrorCode::kDomainError, "Phi needs a finite nonzero argument");
  }
  return std::exp(-kI * z) * expint_e1(-kI * z);
}

cplx phi_function(double z) {
  if (!(z > 0.0)) fail(ErrorCode::kDomainError, "Phi needs z > 0");
  return phi_any(z);
}

}  // namespace blochfar
