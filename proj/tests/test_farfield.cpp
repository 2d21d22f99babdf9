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

#include <cmath>

#include "blochfar/farfield.hpp"
#include "blochfar/green.hpp"
#include "blochfar/special.hpp"
#include "doctest.h"

using namespace blochfar;

namespace {
double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

SpecialPoint small_k_sos(double k) {
  SpecialPoint sp;
  sp.kind = SpecialKind::kSoS;
  sp.location = {-k, 0.0};
  sp.grad = {2.0 * k, 0.0};
  sp.grad_norm = 2.0 * k;
  sp.normal = {1.0, 0.0};
  sp.s = 1;
  sp.alpha = 1.0 / (4.0 * k * k);
  return sp;
}
}  // namespace

TEST_CASE("small-k SoS term reduces to the continuum Hankel asymptote") {
  const double k = 0.1;
  const LatticeIndex m{400, 0};
  const auto t = sos_farfield_term(small_k_sos(k), {}, m);
  const double r = 400.0;
  // With xi* = (-k, 0) the phase is exp(-i m.xi*) = exp(ikr).
  const cplx expect = -std::exp(kI * kPi / 4.0) / (2.0 * std::sqrt(2.0 * kPi)) *
                      std::exp(kI * k * r) / std::sqrt(k * r);
  CHECK(rel(t.value, expect) < 1e-12);
  CHECK(t.decay_exponent == doctest::Approx(0.5));
}

TEST_CASE("flipping the orientation sign conjugates the phase factors") {
  auto sp = small_k_sos(0.2);
  const LatticeIndex m{50, 0};
  const auto a = sos_farfield_term(sp, {}, m);
  sp.s = -1;
  const auto b = sos_farfield_term(sp, {}, m);
  CHECK(std::abs(std::abs(a.value) - std::abs(b.value)) < 1e-14);
  CHECK(rel(a.value / a.phase, std::conj(b.value / b.phase)) < 1e-12);
}

TEST_CASE("transverse crossing activity") {
  SpecialPoint cr;
  cr.kind = SpecialKind::kTransverseCrossing;
  cr.location = {0, 0};
  cr.grad1 = {1, 0};
  cr.grad2 = {0, 1};
  cr.s1 = cr.s2 = 1;
  cr.delta = 1.0;
  const cplx A = 1.0 / (4 * kPi * kPi);
  const auto on = transverse_crossing_term(cr, A, 1.0, 1.0, {5, 5});
  CHECK(std::abs(on.value + 1.0) < 1e-12);
  const auto off = transverse_crossing_term(cr, A, 1.0, 1.0, {5, -5});
  CHECK(off.value == cplx(0.0));
  try {
    transverse_crossing_term(cr, A, 1.0, 1.0, {5, 0});
    FAIL("expected OnActivityBoundary");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kOnActivityBoundary);
  }
}

TEST_CASE("flat segment term") {
  SpecialPoint seg;
  seg.kind = SpecialKind::kFlatSegment;
  seg.line_a = 1.0;
  seg.line_b = 0.0;
  seg.line_c = 0.0;
  seg.grad = {1.0, 0.0};
  seg.grad_norm = 1.0;
  seg.normal = {1.0, 0.0};
  seg.s = 1;
  seg.seg_start = {0.0, -0.25};
  seg.seg_end = {0.0, 0.25};
  const double L = 0.5;
  const auto t100 = flat_segment_term(seg, {}, cplx(L), {100, 0});
  const auto t400 = flat_segment_term(seg, {}, cplx(L), {400, 0});
  CHECK(rel(t100.value, cplx(0.0, -L / (2 * kPi))) < 1e-12);
  CHECK(rel(t400.value, t100.value) < 1e-12);
  LocalAmplitude half;
  half.mu = 0.5;
  const auto h1 = flat_segment_term(seg, half, cplx(L), {100, 0});
  const auto h4 = flat_segment_term(seg, half, cplx(L), {400, 0});
  CHECK(std::abs(h1.value) / std::abs(h4.value) == doctest::Approx(2.0).epsilon(1e-10));
  try {
    flat_segment_term(seg, {}, cplx(L), {100, 7});
    FAIL("expected NotPerpendicular");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotPerpendicular);
  }
}

TEST_CASE("lattice far field against the residue series") {
  CHECK(rel(lattice_farfield({50, 0}, 0.5), green_residue_series({50, 0}, 0.5).value) < 0.03);
  const double h = std::abs(0.25 * hankel1_0(0.2 * 80));
  CHECK(std::abs(std::abs(lattice_farfield({0, -80}, 0.2)) - h) / h < 0.03);
  CHECK(lattice_farfield({30, 30}, 3.0) == cplx(0.0));
  double prev = 1.0;
  for (int N : {25, 50, 100}) {
    const cplx u = green_residue_series({N, 0}, 1.0).value;
    const double e = rel(lattice_farfield({N, 0}, 1.0), u);
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("far-field laws") {
  // Pure power law of a single term.
  const auto s = lattice_farfield_terms({10, 0}, 1.0);
  REQUIRE(s.terms.size() == 1);
  const double c10 = std::abs(s.terms[0].value) * std::sqrt(10.0);
  for (int N : {20, 40, 80}) {
    const auto t = lattice_farfield_terms({N, 0}, 1.0);
    CHECK(std::abs(std::abs(t.terms[0].value) * std::sqrt(double(N)) - c10) < 1e-10 * c10);
  }
  // Phase advance per step equals -m~.xi*.
  const Vec2 xs = s.terms[0].source.location;
  const cplx u1 = green_residue_series({200, 0}, 1.0).value;
  const cplx u2 = green_residue_series({201, 0}, 1.0).value;
  const double dphi = std::remainder(std::arg(u2 / u1) + xs[0], 2 * kPi);
  CHECK(std::abs(dphi) < 1e-2);
  // Reciprocity.
  CHECK(rel(lattice_farfield({-40, -17}, 0.9), lattice_farfield({40, 17}, 0.9)) < 1e-10);
}
