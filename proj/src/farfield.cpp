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

#include "blochfar/farfield.hpp"

#include <cmath>
#include <numeric>

namespace blochfar {

namespace {

double heaviside_arg_tol(const LatticeIndex& m, const Vec2& g) {
  return 1e-12 * (m.norm() + 1.0) * (std::hypot(g[0], g[1]) + 1.0);
}

}  // namespace

FarFieldTerm sos_farfield_term(const SpecialPoint& sos,
                               const LocalAmplitude& amp,
                               const LatticeIndex& m) {
  if (sos.kind != SpecialKind::kSoS) {
    fail(ErrorCode::kInvalidArgument, "special point is not a SoS");
  }
  if (sos.alpha == 0.0) fail(ErrorCode::kZeroCurvature, "alpha = 0");
  if (!(amp.mu > 0.0)) fail(ErrorCode::kInvalidArgument, "mu must be > 0");
  FarFieldTerm t;
  t.source = sos;
  const double m1 = static_cast<double>(m.m1), m2 = static_cast<double>(m.m2);
  t.phase = std::exp(-kI * (m1 * sos.location[0] + m2 * sos.location[1]));
  t.decay_exponent = 1.5 - amp.mu;
  const double q2 = sos.grad_norm * sos.grad_norm;
  const double nstar = m.norm() / sos.grad_norm;
  const double s = sos.s;
  const double sa = s * sos.alpha;
  const cplx quarter = sa > 0.0 ? std::exp(-kI * (kPi / 4)) / std::sqrt(sa)
                                : std::exp(kI * (kPi / 4)) / std::sqrt(-sa);
  t.value = 2.0 * kPi * amp.A * t.phase * std::sqrt(kPi) *
            std::exp(-kI * (s * amp.mu * kPi / 2)) /
            (std::tgamma(amp.mu) * q2 * std::pow(nstar, t.decay_exponent)) *
            quarter;
  if (std::abs(t.value) < 1e-300) t.value = 0.0;
  return t;
}

FarFieldTerm transverse_crossing_term(const SpecialPoint& cr, cplx A,
                                      double mu1, double mu2,
                                      const LatticeIndex& m, bool additive) {
  if (cr.kind != SpecialKind::kTransverseCrossing) {
    fail(ErrorCode::kInvalidArgument, "special point is not a crossing");
  }
  if (!(cr.delta > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "crossing needs delta > 0");
  }
  FarFieldTerm t;
  t.source = cr;
  const double m1 = static_cast<double>(m.m1), m2 = static_cast<double>(m.m2);
  t.phase = std::exp(-kI * (m1 * cr.location[0] + m2 * cr.location[1]));
  t.decay_exponent = 2.0 - mu1 - mu2;
  if (additive) return t;
  const double h1 = m1 * cr.grad2[1] - m2 * cr.grad2[0];
  const double h2 = -m1 * cr.grad1[1] + m2 * cr.grad1[0];
  if (std::abs(h1) <= heaviside_arg_tol(m, cr.grad2) ||
      std::abs(h2) <= heaviside_arg_tol(m, cr.grad1)) {
    fail(ErrorCode::kOnActivityBoundary,
         "direction lies on the boundary of the active region");
  }
  if (!(cr.s1 * h1 > 0.0) || !(cr.s2 * h2 > 0.0)) return t;
  t.value = 4.0 * kPi * kPi * A * t.phase *
            std::exp(-kI * (kPi / 2 * (cr.s1 * mu1 + cr.s2 * mu2))) /
            (std::tgamma(mu1) * std::tgamma(mu2) *
             std::pow(cr.delta, mu1 + mu2 - 1.0)) /
            std::pow(std::abs(h1), 1.0 - mu1) /
            std::pow(std::abs(h2), 1.0 - mu2);
  if (std::abs(t.value) < 1e-300) t.value = 0.0;
  return t;
}

FarFieldTerm flat_segment_term(const SpecialPoint& seg,
                               const LocalAmplitude& amp, cplx h_integral,
                               const LatticeIndex& m) {
  if (seg.kind != SpecialKind::kFlatSegment) {
    fail(ErrorCode::kInvalidArgument, "special point is not a flat segment");
  }
  const double a = seg.line_a, b = seg.line_b;
  const double q2 = a * a + b * b;
  const double m1 = static_cast<double>(m.m1), m2 = static_cast<double>(m.m2);
  const double mn = m.norm();
  if (mn == 0.0 || std::abs(m1 * b - m2 * a) > 1e-8 * mn * std::sqrt(q2)) {
    fail(ErrorCode::kNotPerpendicular,
         "direction is not normal to the flat segment");
  }
  FarFieldTerm t;
  t.source = seg;
  t.decay_exponent = 1.0 - amp.mu;
  const double nstar = mn / std::sqrt(q2);
  const double s = seg.s;
  t.phase = std::exp(-kI * (s * seg.line_c * nstar));
  if (!(s * (m1 * a + m2 * b) > 0.0)) return t;
  t.value = 2.0 * kPi * amp.A * t.phase *
            std::exp(-kI * (s * amp.mu * kPi / 2)) /
            (std::tgamma(amp.mu) * q2 * std::pow(nstar, t.decay_exponent)) *
            h_integral;
  if (std::abs(t.value) < 1e-300) t.value = 0.0;
  return t;
}

FarFieldSum lattice_farfield_terms(const LatticeIndex& m, double k,
                                   const TraceOptions& opt) {
  if (m.m1 == 0 && m.m2 == 0) {
    fail(ErrorCode::kInvalidArgument, "far field needs m != 0");
  }
  const long g = std::gcd(std::abs(m.m1), std::abs(m.m2));
  const LatticeIndex dir{m.m1 / g, m.m2 / g};
  FarFieldSum out;
  const auto pts = classify_special_points(lattice_model(), k, dir, opt);
  const LocalAmplitude amp{};
  std::vector<Vec2> sos;
  for (const auto& p : pts) {
    if (p.kind != SpecialKind::kSoS) continue;
    out.terms.push_back(sos_farfield_term(p, amp, m));
    out.value += out.terms.back().value;
    sos.push_back(p.location);
  }
  out.min_sos_gap = sos.size() > 1 ? 1e300 : 0.0;
  for (size_t i = 0; i < sos.size(); ++i) {
    for (size_t j = i + 1; j < sos.size(); ++j) {
      const double dx = std::remainder(sos[i][0] - sos[j][0], 2 * kPi);
      const double dy = std::remainder(sos[i][1] - sos[j][1], 2 * kPi);
      out.min_sos_gap = std::min(out.min_sos_gap, std::hypot(dx, dy));
    }
  }
  return out;
}

cplx lattice_farfield(const LatticeIndex& m, double k) {
  return lattice_farfield_terms(m, k).value;
}

}  // namespace blochfar
