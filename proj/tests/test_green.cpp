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

#include "blochfar/green.hpp"
#include "blochfar/special.hpp"
#include "doctest.h"

using namespace blochfar;

namespace {
double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }
const QuadratureGrid kTrap{256, 256, QuadratureRule::kTrapezoidPeriodic};
}  // namespace

TEST_CASE("residue series reference values") {
  // Frozen from the residue route, cross-checked by the kappa and surface routes.
  const auto a = green_residue_series({10, 0}, 1.0);
  CHECK(rel(a.value, cplx(-0.016342511478, 0.065712887325)) < 1e-9);
  const auto b = green_residue_series({3, -7}, 1.0);
  CHECK(rel(b.value, cplx(0.0580183783, -0.0571066194)) < 1e-8);
}

TEST_CASE("kappa regularized matches the complex residue series") {
  const cplx w(1.0, 0.5);
  const auto q = green_kappa_regularized({0, 0}, 1.0, 0.5, kTrap);
  const auto r = green_residue_series_complex({0, 0}, w);
  CHECK(rel(q.value, r.value) < 1e-8);
  const auto s1 = green_kappa_regularized({5, 0}, 1.0, 0.3, kTrap);
  const auto s2 = green_kappa_regularized({0, 5}, 1.0, 0.3, kTrap);
  const auto s3 = green_kappa_regularized({-5, 0}, 1.0, 0.3, kTrap);
  CHECK(std::abs(s1.value - s2.value) < 1e-14);
  CHECK(std::abs(s1.value - s3.value) < 1e-14);
  CHECK(std::isfinite(std::abs(green_kappa_regularized({0, 0}, 3.0, 0.1, kTrap).value)));
}

TEST_CASE("kappa extrapolation") {
  const auto e = kappa_extrapolate({10, 0}, 1.0);
  CHECK(rel(e.value, green_residue_series({10, 0}, 1.0).value) < 1e-5);
  const auto g = kappa_extrapolate({0, 0}, 3.0);
  const auto d = green_residue_series({0, 0}, 3.0);
  CHECK(std::abs(g.value - d.value) < 5.0 * g.error);
  CHECK(rel(g.value, d.value) < 1e-5);
  try {
    kappa_extrapolate({10, 10}, 2.0);
    FAIL("expected ExtrapolationDiverged");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::kExtrapolationDiverged);
  }
}

TEST_CASE("deformed surface and bypass") {
  const cplx ref = green_residue_series({10, 0}, 1.0).value;
  const auto good = green_deformed_surface({10, 0}, 1.0, lattice_bypass_surface(1.0, 1, 0.2), kTrap);
  const auto bad = green_deformed_surface({10, 0}, 1.0, lattice_bypass_surface(1.0, -1, 0.2), kTrap);
  CHECK(rel(good.value, ref) < 1e-6);
  CHECK(rel(bad.value, ref) > 0.1);
  // Opposite bypass gives the conjugate for the real-symmetric lattice.
  CHECK(rel(bad.value, std::conj(ref)) < 1e-6);
  // Group-velocity bypass is the "-" branch of the explicit field.
  const auto explicit_minus =
      green_deformed_surface({10, 0}, 1.0, lattice_explicit_surface(1.0, -1, 0.2), kTrap);
  CHECK(rel(explicit_minus.value, ref) < 1e-6);
  // Surface independence.
  const auto other = green_deformed_surface({10, 0}, 1.0, lattice_bypass_surface(1.0, 1, 0.1), kTrap);
  CHECK(rel(other.value, good.value) < 1e-8);
  // Band gap: the surface is irrelevant.
  const auto gap = green_deformed_surface({0, 0}, 3.0, lattice_bypass_surface(3.0, 1, 0.2), kTrap);
  const auto flat = green_residue_series({0, 0}, 3.0);
  CHECK(rel(gap.value, flat.value) < 1e-8);
}

TEST_CASE("surface admissibility") {
  const auto s = lattice_bypass_surface(1.0, 1, 0.2);
  const auto rep = check_surface(s, 1.0, 64);
  CHECK(rep.max_eps_eta <= 0.5);
  CHECK(rep.min_transversality > 0.0);
}

TEST_CASE("residue series behaviour") {
  const auto a = green_residue_series({0, -10}, 1.0);
  CHECK(rel(a.value, kappa_extrapolate({0, -10}, 1.0).value) < 1e-5);
  const auto b = green_residue_series({0, -50}, 0.2);
  const double h = std::abs(0.25 * hankel1_0(0.2 * 50));
  CHECK(std::abs(std::abs(b.value) - h) / h < 0.03);
  const auto c = green_residue_series({0, -10}, 3.0);
  const auto c20 = green_residue_series({0, -20}, 3.0);
  CHECK(std::abs(c.value) < std::exp(-0.5 * 10));
  CHECK(std::abs(c20.value) < std::abs(c.value) * std::exp(-0.5 * 10));
  try {
    green_residue_series({1, 0}, 2.0);
    FAIL("expected DegenerateWavenumber");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateWavenumber);
  }
}

TEST_CASE("lattice symmetry of u") {
  const cplx u = green_residue_series({4, 7}, 1.5).value;
  CHECK(rel(green_residue_series({7, 4}, 1.5).value, u) < 1e-10);
  CHECK(rel(green_residue_series({-4, 7}, 1.5).value, u) < 1e-10);
  CHECK(rel(green_residue_series({-4, -7}, 1.5).value, u) < 1e-10);
}

TEST_CASE("degeneracy guard") {
  CHECK(lattice_near_degenerate(2.0 + 1e-8));
  CHECK(lattice_near_degenerate(2.0 * std::sqrt(2.0)));
  CHECK_FALSE(lattice_near_degenerate(1.0));
}
