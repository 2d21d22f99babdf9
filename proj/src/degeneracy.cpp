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

#include "blochfar/degeneracy.hpp"

#include <cmath>
#include <vector>

#include "blochfar/integrate.hpp"

namespace blochfar {

void CanonicalRegime::validate() const {
  if (!(kstar > 0.0)) fail(ErrorCode::kInvalidArgument, "k* must be > 0");
  if (!(Lambda > 0.0)) fail(ErrorCode::kInvalidArgument, "Lambda must be > 0");
  if (N < 1) fail(ErrorCode::kInvalidArgument, "N must be >= 1");
  if (!std::isfinite(khat)) fail(ErrorCode::kInvalidArgument, "khat not finite");
}

cplx canonical_extremum(const CanonicalRegime& r, ExtremumKind kind) {
  r.validate();
  if (r.khat == 0.0) {
    fail(ErrorCode::kAtDegeneracy, "khat = 0: logarithmic blow-up");
  }
  const Vec2 a = r.alpha();
  const double na = std::hypot(a[0], a[1]);
  if (!(na > 0.0)) fail(ErrorCode::kInvalidArgument, "|alpha| must be > 0");
  const double x = na * std::sqrt(std::abs(r.Lambda * r.khat));
  const double L = r.Lambda, ks = r.kstar;
  if (kind == ExtremumKind::kMax) {
    if (r.khat > 0.0) return L * kPi / ks * bessel_k0(x);
    return -kI * (L * kPi * kPi / (2.0 * ks)) * hankel2_0(x);
  }
  if (r.khat > 0.0) return -kI * (L * kPi * kPi / (2.0 * ks)) * hankel1_0(x);
  return -L * kPi / ks * bessel_k0(x);
}

cplx canonical_hyperbolic(const CanonicalRegime& r) {
  r.validate();
  if (r.khat == 0.0) {
    fail(ErrorCode::kAtDegeneracy, "khat = 0: logarithmic blow-up");
  }
  const Vec2 a = r.alpha();
  if (a[0] == 0.0 || a[1] == 0.0) {
    fail(ErrorCode::kOnQuadrantBoundary, "alpha on a coordinate axis");
  }
  const double p = a[0] * a[1];
  const double x = 2.0 * std::sqrt(std::abs(p * r.khat));
  const double ks = r.kstar;
  const bool same = p > 0.0;
  if (r.khat > 0.0) {
    if (same) return kPi * kPi / ks * hankel1_0(x);
    return -2.0 * kI * kPi / ks * bessel_k0(x);
  }
  // khat < 0: propagating and evanescent quadrants swap
  if (same) return -2.0 * kI * kPi / ks * bessel_k0(x);
  return -kPi * kPi / ks * hankel2_0(x);
}

DiracTriple dirac_triple_limit(const Vec2& alpha) {
  const double n2 = alpha[0] * alpha[0] + alpha[1] * alpha[1];
  if (!(n2 > 0.0)) fail(ErrorCode::kInvalidArgument, "|alpha| must be > 0");
  DiracTriple t;
  t.J0 = 0.0;
  t.J1 = -2.0 * kI * kPi * alpha[0] / n2;
  t.J2 = -2.0 * kI * kPi * alpha[1] / n2;
  t.asymptotic = true;
  return t;
}

DiracTriple dirac_canonical_triple(const Vec2& alpha, double rho,
                                   int khat_sign) {
  const double na = std::hypot(alpha[0], alpha[1]);
  if (!(na > 0.0)) fail(ErrorCode::kInvalidArgument, "|alpha| must be > 0");
  if (rho == 0.0) {
    fail(ErrorCode::kZeroRho, "rho = 0; use dirac_triple_limit");
  }
  if ((rho > 0.0) != (khat_sign > 0)) {
    fail(ErrorCode::kInvalidArgument, "sign of rho disagrees with khat");
  }
  const double x = std::abs(rho) * na;
  DiracTriple t;
  const double pp = kPi * kPi;
  if (rho > 0.0) {
    t.J0 = kI * pp * hankel1_0(x);
    const cplx h1 = hankel1_1(x);
    t.J1 = pp * rho * alpha[0] / na * h1;
    t.J2 = pp * rho * alpha[1] / na * h1;
  } else {
    t.J0 = -kI * pp * hankel2_0(x);
    const cplx h1 = hankel2_1(x);
    t.J1 = pp * rho * alpha[0] / na * h1;
    t.J2 = pp * rho * alpha[1] / na * h1;
  }
  return t;
}

void DiracLocalModel::validate(double tol) const {
  const double c1 = q1 * q1 + std::norm(q2) - 1.0;
  const double c2 = q3 * q3 + std::norm(q4) - 1.0;
  const double c3 = 2.0 * (q4 * std::conj(q2)).real() + 2.0 * q1 * q3;
  if (std::abs(c1) > tol || std::abs(c2) > tol || std::abs(c3) > tol) {
    fail(ErrorCode::kInvalidModel, "q coefficients violate the cone structure");
  }
  const double det =
      Psi_star[0][0] * Psi_star[1][1] - Psi_star[0][1] * Psi_star[1][0];
  if (!(std::abs(det) > 1e-300)) {
    fail(ErrorCode::kInvalidModel, "Psi* is singular");
  }
}

std::array<std::array<cplx, 2>, 2> dirac_I_matrix(const DiracLocalModel& m,
                                                  const DiracTriple& J) {
  std::array<std::array<cplx, 2>, 2> I;
  const cplx rj0 = J.asymptotic ? cplx(0.0) : m.rho * J.J0;
  I[0][0] = m.q1 * J.J1 + m.q3 * J.J2 - rj0;
  I[0][1] = std::conj(m.q2) * J.J1 + std::conj(m.q4) * J.J2;
  I[1][0] = m.q2 * J.J1 + m.q4 * J.J2;
  I[1][1] = -m.q1 * J.J1 - m.q3 * J.J2 - rj0;
  return I;
}

cplx dirac_farfield(const DiracLocalModel& model, const LatticeIndex& m) {
  model.validate();
  const double m1 = static_cast<double>(m.m1), m2 = static_cast<double>(m.m2);
  const Mat2& P = model.Psi_star;
  const Vec2 alpha{P[0][0] * m1 + P[1][0] * m2, P[0][1] * m1 + P[1][1] * m2};
  const DiracTriple J =
      dirac_canonical_triple(alpha, model.rho, model.rho > 0.0 ? 1 : -1);
  const auto I = dirac_I_matrix(model, J);
  const cplx obs[2] = {model.Vl1_obs, model.Vl2_obs};
  const cplx src[2] = {model.Vl1_src, model.Vl2_src};
  cplx sum = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) sum += I[a][b] * obs[a] * std::conj(src[b]);
  }
  const double det = P[0][0] * P[1][1] - P[0][1] * P[1][0];
  const cplx phase =
      std::exp(-kI * (m1 * model.xi_star[0] + m2 * model.xi_star[1]));
  return det * phase / (4.0 * kPi * kPi) * sum;
}

namespace {

void check_time_args(double c, double t) {
  if (!(c > 0.0) || !(t > 0.0)) {
    fail(ErrorCode::kDomainError, "c and t must be positive");
  }
}

}  // namespace

cplx resonance_time_integral(const Vec2& alpha, double c, double t) {
  if (!(alpha[0] > 0.0 && alpha[1] > 0.0)) {
    fail(ErrorCode::kDomainError, "closed form stated for alpha1, alpha2 > 0");
  }
  return resonance_time_integral_any(alpha, c, t);
}

cplx resonance_time_integral_any(const Vec2& alpha, double c, double t) {
  check_time_args(c, t);
  const double z = alpha[0] * alpha[1] / (c * t);
  if (z == 0.0) fail(ErrorCode::kDomainError, "alpha on a coordinate axis");
  return 2.0 * kPi * kI * std::exp(kI * z) * phi_any(z);
}

cplx resonance_time_oracle(const Vec2& alpha, double c, double t) {
  check_time_args(c, t);
  const double p = alpha[0] * alpha[1];
  if (p == 0.0) fail(ErrorCode::kDomainError, "alpha on a coordinate axis");
  // u = 1/s, then the ray u = u0 + i v (p > 0) or u0 - i v (p < 0)
  const double u0 = 1.0 / (c * t);
  const double ap = std::abs(p);
  const double sg = p > 0.0 ? 1.0 : -1.0;
  auto f = [&](double v) -> cplx {
    return std::exp(-ap * v) / cplx(u0, sg * v);
  };
  std::vector<double> br{0.0};
  const double vmax = 60.0 / ap;
  for (double b = u0; b < vmax; b *= 4.0) br.push_back(b);
  br.push_back(vmax);
  QuadResult r = integrate_adaptive(f, br, 1e-16, 1e-13, 20000);
  if (!r.converged) {
    fail(ErrorCode::kQuadratureFailure, "proper-time quadrature");
  }
  const cplx ray = sg * kI * std::exp(kI * p * u0) * r.value;
  return 2.0 * kPi * kI * ray;
}

cplx canonical_extremum_oracle(const CanonicalRegime& r, ExtremumKind kind,
                               const PlaneOracleOptions& opt) {
  r.validate();
  const double pm = kind == ExtremumKind::kMax ? 1.0 : -1.0;
  const double lk = r.Lambda * r.khat;
  PlaneFactor f;
  f.q = [=](cplx a, cplx b) { return lk + pm * (a * a + b * b); };
  f.grad = [=](double a, double b) -> Vec2 { return {2 * pm * a, 2 * pm * b}; };
  f.sign = 1;
  const double scale = r.Lambda / (2.0 * r.kstar);
  return scale * plane_oracle([](cplx, cplx) { return cplx(1.0); }, {f},
                              r.alpha(), opt);
}

cplx canonical_hyperbolic_oracle(const CanonicalRegime& r,
                                 const PlaneOracleOptions& opt) {
  r.validate();
  const double kh = r.khat;
  PlaneFactor f;
  f.q = [=](cplx a, cplx b) { return kh - a * b; };
  f.grad = [](double a, double b) -> Vec2 { return {-b, -a}; };
  f.sign = 1;
  return plane_oracle([](cplx, cplx) { return cplx(1.0); }, {f}, r.alpha(),
                      opt) /
         (2.0 * r.kstar);
}

DiracTriple dirac_triple_oracle(const Vec2& alpha, double rho,
                                const PlaneOracleOptions& opt) {
  if (rho == 0.0) fail(ErrorCode::kZeroRho, "rho = 0");
  PlaneFactor f;
  const double r2 = rho * rho;
  f.q = [=](cplx a, cplx b) { return a * a + b * b - r2; };
  f.grad = [](double a, double b) -> Vec2 { return {2 * a, 2 * b}; };
  f.sign = rho > 0.0 ? -1 : 1;
  DiracTriple t;
  t.J0 = plane_oracle([](cplx, cplx) { return cplx(1.0); }, {f}, alpha, opt);
  t.J1 = plane_oracle([](cplx a, cplx) { return a; }, {f}, alpha, opt);
  t.J2 = plane_oracle([](cplx, cplx b) { return b; }, {f}, alpha, opt);
  return t;
}

}  // namespace blochfar
