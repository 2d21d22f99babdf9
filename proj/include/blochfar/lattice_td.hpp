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

#include <vector>

#include "blochfar/spectral.hpp"

namespace blochfar {

// Square lattice u'' = c^2 (Laplace u - f), point source at the origin with
// time factor exp(-i omega t) and a half-cosine ramp. Solved on the quarter
// domain [0, L)^2 using the even symmetry of the field.
struct LatticeTDOptions {
  int L = 270;
  double T = 500.0;
  double dt = 0.2;
  double omega = 2.0;
  double c = 1.0;
  double ramp_time = 20.0;
  std::vector<LatticeIndex> observers{{2, 0}};
};

struct LatticeTDResult {
  std::vector<double> times;
  // samples[o][s]: observer o at times[s], demodulated by exp(i omega t).
  std::vector<std::vector<cplx>> samples;
};

LatticeTDResult lattice_time_domain(const LatticeTDOptions& opt);

struct LogFit {
  double a = 0.0, b = 0.0, r2 = 0.0;
};

// Least-squares fit y = a + b log t over samples with t in [t_lo, t_hi].
LogFit fit_log_growth(const std::vector<double>& t, const std::vector<double>& y,
                      double t_lo, double t_hi);

}  // namespace blochfar
