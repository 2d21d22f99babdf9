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

#include "blochfar/degeneracy.hpp"
#include "doctest.h"

using namespace blochfar;

namespace {
double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}
}  // namespace

TEST_CASE("extremum closed form against the plane oracle") {
  for (double kh : {0.01, -0.01})
    for (auto kind : {ExtremumKind::kMax, ExtremumKind::kMin}) {
      CanonicalRegime r{kh, 2.0 * std::sqrt(2.0), 1.0, {30, 0}, 1};
      CHECK(rel(canonical_extremum_oracle(r, kind), canonical_extremum(r, kind)) < 1e-8);
    }
}

TEST_CASE("hyperbolic closed form against the plane oracle") {
  for (Vec2 a : {Vec2{10, 10}, Vec2{10, -10}})
    for (double kh : {0.01, -0.01}) {
      CanonicalRegime r{kh, 2.0, 1.0, a, 1};
      CHECK(rel(canonical_hyperbolic_oracle(r), canonical_hyperbolic(r)) < 1e-4);
    }
}

TEST_CASE("hyperbolic pinch grows logarithmically") {
  // |u| ~ c log(1/|khat|) as khat -> 0.
  const auto val = [](double kh) {
    return std::abs(canonical_hyperbolic(CanonicalRegime{kh, 2.0, 1.0, {10, 10}, 1}));
  };
  const double s1 = val(1e-6) - val(1e-5);
  const double s2 = val(1e-8) - val(1e-7);
  CHECK(s1 > 0.0);
  CHECK(s2 == doctest::Approx(s1).epsilon(0.05));
}

TEST_CASE("Dirac triple against the plane oracle") {
  for (double rho : {0.2, -0.2}) {
    const auto c = dirac_canonical_triple({20, 5}, rho, rho > 0 ? 1 : -1);
    const auto o = dirac_triple_oracle({20, 5}, rho);
    CHECK(rel(o.J0, c.J0) < 1e-6);
    CHECK(rel(o.J1, c.J1) < 1e-6);
    CHECK(rel(o.J2, c.J2) < 1e-6);
  }
}

TEST_CASE("Dirac limit") {
  const auto lim = dirac_triple_limit({3, 4});
  CHECK(lim.asymptotic);
  CHECK(std::abs(lim.J1 / lim.J2 - cplx(0.75)) < 1e-12);
  const auto small = dirac_canonical_triple({3, 4}, 1e-7, 1);
  CHECK(rel(small.J1, lim.J1) < 1e-4);
  CHECK(rel(small.J2, lim.J2) < 1e-4);
  CHECK(code_of([] { dirac_canonical_triple({3, 4}, 0.0, 1); }) == ErrorCode::kZeroRho);
  CHECK(code_of([] { dirac_canonical_triple({3, 4}, 0.2, -1); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("resonance time integral") {
  const cplx v = resonance_time_integral({8, 8}, 1.0, 50.0);
  CHECK(std::abs(v - cplx(-2.524174974853925, -2.773660131979713)) < 1e-12);
  for (Vec2 a : {Vec2{8, 8}, Vec2{8, -8}, Vec2{5, 12}})
    CHECK(rel(resonance_time_oracle(a, 1.0, 50.0), resonance_time_integral_any(a, 1.0, 50.0)) <
          1e-10);
  CHECK(code_of([] { resonance_time_integral({8, 8}, 1.0, -1.0); }) == ErrorCode::kDomainError);
  CHECK(code_of([] { resonance_time_integral({8, -8}, 1.0, 50.0); }) == ErrorCode::kDomainError);
}

TEST_CASE("regime validation") {
  CHECK(code_of([] {
          canonical_extremum(CanonicalRegime{0.0, 2.0, 1.0, {3, 0}, 1}, ExtremumKind::kMax);
        }) == ErrorCode::kAtDegeneracy);
  CHECK(code_of([] { canonical_hyperbolic(CanonicalRegime{0.0, 2.0, 1.0, {3, 3}, 1}); }) ==
        ErrorCode::kAtDegeneracy);
  CHECK(code_of([] { canonical_hyperbolic(CanonicalRegime{0.1, 2.0, 1.0, {3, 0}, 1}); }) ==
        ErrorCode::kOnQuadrantBoundary);
  CHECK(code_of([] {
          canonical_extremum(CanonicalRegime{0.1, -1.0, 1.0, {3, 0}, 1}, ExtremumKind::kMax);
        }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("Dirac model validation") {
  DiracLocalModel m;
  m.q1 = 1.0;
  m.q3 = 2.0;  // |q3| > 1 cannot be a unit row
  m.rho = 0.1;
  m.Psi_star = {{{1.0, 0.0}, {0.0, 1.0}}};
  CHECK(code_of([&] { m.validate(); }) == ErrorCode::kInvalidModel);
}
