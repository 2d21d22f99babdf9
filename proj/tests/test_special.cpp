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
#include "doctest.h"

using namespace blochfar;

namespace {
struct Ref {
  double x, j0, y0, j1, y1, k0;
};
// 30-digit mpmath values.
const Ref kRefs[] = {
    {0.5, 0.9384698072408129, -0.44451873350670656, 0.24226845767487389, -1.4714723926702431,
     0.92441907122766586},
    {3.0, -0.26005195490193344, 0.37685001001279038, 0.33905895852593646, 0.32467442479179998,
     0.034739504386279248},
    {12.0, 0.047689310796833537, -0.22523731263436143, -0.22344710449062761,
     -0.057099218260896521, 2.2008253973114914e-6},
    {40.0, 0.0073668905842372896, 0.12593641705826093, 0.126038318037585,
     -0.0057935058215496329, 8.392861100099567e-19},
    {300.0, -0.033298554876305668, -0.031831889730003398, -0.03188743137749995,
     0.033245548121310216, 3.7236948548891433e-132},
};
bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }
}  // namespace

TEST_CASE("cylinder functions against reference values") {
  for (const auto& r : kRefs) {
    const auto b = bessel_jy(r.x);
    // Absolute tolerance near zeros scales with the envelope sqrt(2/(pi x)).
    const double env = std::sqrt(2.0 / (kPi * r.x));
    CHECK(std::abs(b.j0 - r.j0) < 1e-13 * env);
    CHECK(std::abs(b.y0 - r.y0) < 1e-13 * env);
    CHECK(std::abs(b.j1 - r.j1) < 1e-13 * env);
    CHECK(std::abs(b.y1 - r.y1) < 1e-13 * env);
    CHECK(close(bessel_k0(r.x), r.k0, 1e-12));
  }
  const auto c = cylinder_functions(1.0);
  CHECK(close(c.K0, 0.42102443824070833, 1e-12));
  CHECK(std::abs(c.H0_1 - cplx(0.76519768655796655, 0.088256964215676958)) < 1e-12);
}

TEST_CASE("identities") {
  for (double x : {0.5, 5.0, 50.0}) {
    const auto b = bessel_jy(x);
    CHECK(std::abs(b.j0 * b.y1 - b.j1 * b.y0 + 2.0 / (kPi * x)) < 1e-12 * 2.0 / (kPi * x));
    CHECK(std::abs(hankel2_0(x) - std::conj(hankel1_0(x))) < 1e-15 * std::abs(hankel1_0(x)));
    CHECK(std::abs(hankel2_1(x) - std::conj(hankel1_1(x))) < 1e-15 * std::abs(hankel1_1(x)));
  }
  for (double bad : {0.0, -1.0}) {
    CHECK_THROWS_AS(cylinder_functions(bad), Error);
    CHECK_THROWS_AS(phi_function(bad), Error);
  }
}

TEST_CASE("exponential integral") {
  CHECK(std::abs(expint_e1(cplx(0.3, 0.2)) - cplx(0.73000921617311625, -0.41556984070966733)) <
        1e-14);
  CHECK(std::abs(expint_e1(cplx(0.0, -3.0)) - cplx(-0.11962978600800033, -0.27785620120457164)) <
        1e-14);
  CHECK(std::abs(expint_e1(cplx(5.0, 1.0)) - cplx(0.00043944980567556962, -0.0010420331174454795)) <
        1e-16);
}

TEST_CASE("phi function") {
  for (double z : {1e-4, 1e-6}) {
    CHECK(std::abs(phi_function(z)) / std::log(1.0 / z) == doctest::Approx(1.0).epsilon(0.1));
  }
  const cplx big = phi_function(1e3);
  CHECK(std::abs(big - cplx(0.0, 1e-3)) < 0.01 * 1e-3);
  for (double z : {1e-3, 0.1, 1.0, 2.0, 2.5, 10.0, 100.0}) CHECK(phi_function(z).imag() > 0.0);
}
