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

#include "blochfar/traces.hpp"

namespace blochfar {

// F ~ 4 pi^2 A g^(-mu) near the trace.
struct LocalAmplitude {
  cplx A{1.0 / (4.0 * kPi * kPi), 0.0};
  double mu = 1.0;
};

struct FarFieldTerm {
  cplx value{};
  SpecialPoint source;
  cplx phase{1.0, 0.0};
  double decay_exponent = 0.0;
};

FarFieldTerm sos_farfield_term(const SpecialPoint& sos,
                               const LocalAmplitude& amp,
                               const LatticeIndex& m);

// Additive crossings contribute nothing; the flag is the caller's claim.
FarFieldTerm transverse_crossing_term(const SpecialPoint& cr, cplx A,
                                      double mu1, double mu2,
                                      const LatticeIndex& m,
                                      bool additive = false);

FarFieldTerm flat_segment_term(const SpecialPoint& seg,
                               const LocalAmplitude& amp, cplx h_integral,
                               const LatticeIndex& m);

struct FarFieldSum {
  cplx value{};
  std::vector<FarFieldTerm> terms;
  // Smallest distance between two SoS; small gaps mean merging points.
  double min_sos_gap = 0.0;
};

FarFieldSum lattice_farfield_terms(const LatticeIndex& m, double k,
                                   const TraceOptions& opt = {});

cplx lattice_farfield(const LatticeIndex& m, double k);

}  // namespace blochfar
