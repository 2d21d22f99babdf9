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

#include <random>

#include "blochfar/integrate.hpp"
#include "blochfar/spectral.hpp"
#include "doctest.h"

using namespace blochfar;

namespace {
BlochPoint bp(double a, double b) { return {cplx(a), cplx(b)}; }
}  // namespace

TEST_CASE("lattice spectral value at fixed points") {
  CHECK(std::abs(lattice_spectral_value(bp(0, 0), {1.0, 0.0}) - 1.0) < 1e-15);
  CHECK(std::abs(lattice_spectral_value(bp(kPi, kPi), {1.0, 0.0}) + 1.0 / 7.0) < 1e-15);
  try {
    lattice_spectral_value(bp(kPi / 2, kPi / 2), {2.0, 0.0});
    FAIL("expected SingularEvaluation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSingularEvaluation);
  }
}

TEST_CASE("defining gradient") {
  auto g = lattice_defining_gradient(bp(0, 0), {1.0, 0.0});
  CHECK(std::abs(g.g - 1.0) < 1e-15);
  CHECK(std::abs(g.grad[0]) < 1e-15);
  g = lattice_defining_gradient(bp(kPi / 2, kPi / 2), {2.0, 0.0});
  CHECK(std::abs(g.g) < 1e-15);
  CHECK(std::abs(g.grad[0] + 2.0) < 1e-15);
  CHECK(std::abs(g.grad[1] + 2.0) < 1e-15);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-kPi, kPi);
  const double h = 1e-5;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double a = U(rng), b = U(rng);
    const Wavenumber kk{1.3, 0.0};
    const auto v = lattice_defining_gradient(bp(a, b), kk);
    const double d1 = (lattice_denominator(bp(a + h, b), kk) -
                       lattice_denominator(bp(a - h, b), kk)).real() / (2 * h);
    const double d2 = (lattice_denominator(bp(a, b + h), kk) -
                       lattice_denominator(bp(a, b - h), kk)).real() / (2 * h);
    worst = std::max({worst, std::abs(v.grad[0].real() - d1), std::abs(v.grad[1].real() - d2)});
    CHECK(v.g.imag() == 0.0);
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("lattice eigenvalue") {
  CHECK(lattice_eigenvalue({0, 0}) == doctest::Approx(0.0));
  CHECK(lattice_eigenvalue({kPi, kPi}) == doctest::Approx(8.0));
  CHECK(lattice_eigenvalue({kPi / 2, kPi / 2}) == doctest::Approx(4.0));
}

TEST_CASE("eigen expansion") {
  std::vector<EigenTerm> one{{[](const Vec2& x) { return lattice_eigenvalue(x); },
                              [](const Vec2&) { return cplx(1.0); }}};
  CHECK(std::abs(eigen_expansion_value(one, {0, 0}, {1.0, 0.0}) - 1.0) < 1e-15);
  CHECK(std::abs(eigen_expansion_value(one, {kPi, kPi}, {1.0, 0.0}) + 1.0 / 7.0) < 1e-15);
  std::vector<EigenTerm> three;
  for (int j = 0; j < 3; ++j) {
    three.push_back({[j](const Vec2&) { return j + 1.0; }, [](const Vec2&) { return cplx(1.0); }});
  }
  CHECK(std::abs(eigen_expansion_value(three, {0.3, -1.0}, {0.0, 0.0}) + 11.0 / 6.0) < 1e-15);
}

TEST_CASE("lattice symmetries and periodicity") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-kPi, kPi);
  for (int i = 0; i < 50; ++i) {
    const double a = U(rng), b = U(rng);
    const Wavenumber kk{0.7 + 0.02 * i, 0.1};
    const cplx f = lattice_spectral_value(bp(a, b), kk);
    CHECK(std::abs(f - lattice_spectral_value(bp(b, a), kk)) <= 1e-15 * std::abs(f));
    CHECK(std::abs(f - lattice_spectral_value(bp(-a, b), kk)) <= 1e-15 * std::abs(f));
    CHECK(std::abs(f - lattice_spectral_value(bp(a, -b), kk)) <= 1e-15 * std::abs(f));
    CHECK(std::abs(f - lattice_spectral_value(bp(a + 2 * kPi, b), kk)) <= 1e-13 * std::abs(f));
    CHECK(std::abs(f - lattice_spectral_value(bp(a, b + 2 * kPi), kk)) <= 1e-13 * std::abs(f));
  }
}

TEST_CASE("absorption keeps the denominator away from zero") {
  double least = 1e300;
  for (int i = 0; i <= 200; ++i) {
    for (int j = 0; j <= 200; ++j) {
      const double a = -kPi + 2 * kPi * i / 200, b = -kPi + 2 * kPi * j / 200;
      least = std::min(least, std::abs(lattice_denominator(bp(a, b), {2.0, 0.05})));
    }
  }
  CHECK(least > 0.0);
}

TEST_CASE("wrapping is explicit") {
  const auto w = wrap(BlochPoint{cplx(3 * kPi + 0.1, 0.2), cplx(-7.0, 0.0)});
  CHECK(w.xi1.real() >= -kPi);
  CHECK(w.xi1.real() <= kPi);
  CHECK(w.xi1.imag() == 0.2);
  CHECK(w.xi2.real() == doctest::Approx(-7.0 + 2 * kPi));
  CHECK_FALSE(is_finite(BlochPoint{cplx(NAN, 0), cplx(0)}));
}

TEST_CASE("pairwise sum is order independent of chunking") {
  std::vector<double> v(1000);
  for (size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / (1.0 + i);
  const double a = pairwise_sum(v);
  const double b = pairwise_sum(v);
  CHECK(a == b);
  CHECK(a == doctest::Approx(7.4854708605503449).epsilon(1e-14));
}

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  std::vector<double> x, w;
  gauss_legendre(8, x, w);
  double s = 0;
  for (size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], 14);
  CHECK(s == doctest::Approx(2.0 / 15.0).epsilon(1e-14));
}
