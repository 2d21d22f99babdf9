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

#include <functional>
#include <vector>

#include "blochfar/spectral.hpp"

namespace blochfar {

enum class QuadratureRule { kTrapezoidPeriodic, kGaussLegendre, kAdaptive };

struct QuadratureGrid {
  int n1 = 128;
  int n2 = 128;
  QuadratureRule rule = QuadratureRule::kTrapezoidPeriodic;
  void validate() const;
};

struct QuadratureOptions {
  // Relative change allowed between a grid and its doubling.
  double rel_tol = 1e-8;
  int max_doublings = 6;
  // Tolerances of the iterated adaptive rule.
  double adaptive_rel_tol = 1e-11;
  double adaptive_abs_tol = 1e-15;
};

struct GreenValue {
  cplx value{};
  double error = 0.0;
};

GreenValue green_kappa_regularized(const LatticeIndex& m, double k,
                                   double kappa, const QuadratureGrid& grid,
                                   const QuadratureOptions& opt = {});

struct ExtrapolationResult {
  cplx value{};
  double error = 0.0;
  std::vector<double> ladder;
  std::vector<cplx> samples;
  std::vector<cplx> extrapolants;
};

std::vector<double> default_kappa_ladder(const LatticeIndex& m);

// Empty ladder selects default_kappa_ladder(m).
ExtrapolationResult kappa_extrapolate(
    const LatticeIndex& m, double k, std::vector<double> ladder = {},
    QuadratureGrid grid = {8, 8, QuadratureRule::kAdaptive},
    const QuadratureOptions& opt = {});

struct DeformedSurface {
  std::function<Vec2(const Vec2&)> eta;
  // d eta_i / d xi_j
  std::function<Mat2(const Vec2&)> jacobian;
  // Non-positive amplitude requests the automatic choice (0.2, halved).
  double amplitude = 0.2;
};

// The explicit field pm * exp(-g^2) (sin xi1, sin xi2) of the lattice.
// The limiting-absorption bypass is pm = -1 (eta along grad g).
DeformedSurface lattice_explicit_surface(double k, int pm, double amplitude);

// Same field expressed through a bypass sign relative to grad g.
DeformedSurface lattice_bypass_surface(double k, int bypass_sign,
                                       double amplitude);

struct SurfaceReport {
  double amplitude = 0.0;
  double max_eps_eta = 0.0;
  double min_transversality = 1.0;
};

SurfaceReport check_surface(const DeformedSurface& s, double k, int n);

GreenValue green_deformed_surface(const LatticeIndex& m, double k,
                                  const DeformedSurface& surface,
                                  const QuadratureGrid& grid,
                                  const QuadratureOptions& opt = {});

std::vector<GreenValue> green_deformed_surface_many(
    const std::vector<LatticeIndex>& ms, double k,
    const DeformedSurface& surface, const QuadratureGrid& grid,
    const QuadratureOptions& opt = {});

GreenValue green_residue_series(const LatticeIndex& m, double k,
                                double rel_tol = 1e-12);

// Same representation for complex wavenumber w = k + i kappa, kappa > 0.
GreenValue green_residue_series_complex(const LatticeIndex& m, cplx w,
                                        double rel_tol = 1e-12);

bool lattice_near_degenerate(double k, double tol = 1e-6);

}  // namespace blochfar
