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

#include <Eigen/Dense>
#include <vector>

#include "blochfar/fem.hpp"

namespace blochfar {

// Explicit RK4 for M U''/c^2 + K U + gamma M U'/c^2 = exp(-i omega t) ramp(t) E
// on a square patch of cells x cells; nodes beyond the patch are clamped.
struct TimeDomainOptions {
  int cells = 100;
  double dt = 0.1;
  double c = 1.0;
  double omega = 0.8;
  double ramp_time = -1.0;  // negative: half-cosine over the first 10% of steps
  int steps = 3400;
  int src_node = 0;       // reduced node index in the source cell
  int sponge_cells = 12;  // 0 disables the absorbing layer
  double sponge_strength = 0.1;
  double cfl_safety = 0.9;
};

struct TimeDomainResult {
  int cells = 0;
  int n_red = 0;
  int centre = 0;  // source cell index along both axes
  double t_end = 0.0;
  double dt_limit = 0.0;
  Eigen::VectorXcd field;  // U(t_end) exp(i omega t_end)
  double energy = 0.0;
  double work = 0.0;       // input work minus sponge losses
  double energy_balance = 0.0;  // |energy - work| / max(|work|, energy)

  // Demodulated value at reduced node r of cell m, relative to the source cell.
  cplx at(const LatticeIndex& m, int r) const;
  bool contains(const LatticeIndex& m) const;
};

// Largest stable RK4 step for the one-cell pencil.
double rk4_step_limit(const BlochOperator& op, double c);

TimeDomainResult run_time_domain(const BlochOperator& op, const TimeDomainOptions& opt);

}  // namespace blochfar
