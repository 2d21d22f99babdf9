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

// Axis-aligned sampling box for contouring; the default is the zone.
struct TraceBox {
  double x0 = -kPi, x1 = kPi;
  double y0 = -kPi, y1 = kPi;
};

struct TraceOptions {
  int grid = 512;
  double tol = 1e-10;         // |g| after Newton polish
  double regularity = 1e-8;   // minimum |grad g| on a trace
  double degeneracy_guard = 1e-6;
  TraceBox box{};
};

struct RealTrace {
  std::vector<Vec2> points;
  bool closed = false;
  int defining_index = 0;
  // Side of the trace eta points to, relative to grad g. Zero until chosen.
  int bypass_sign = 0;
};

enum class SpecialKind { kSoS, kTransverseCrossing, kFlatSegment };

struct SpecialPoint {
  SpecialKind kind = SpecialKind::kSoS;
  Vec2 location{};
  int trace_index = -1;
  // SoS data
  Vec2 grad{};      // (a*, b*)
  Vec2 normal{};    // grad / |grad|
  int s = 0;
  double alpha = 0.0;
  double grad_norm = 0.0;  // sqrt(a*^2 + b*^2)
  // crossing data (labels ordered so that delta > 0)
  Vec2 grad1{}, grad2{};
  int s1 = 0, s2 = 0;
  double delta = 0.0;
  int index1 = -1, index2 = -1;
  // flat segment: a xi1 + b xi2 + c = 0 between the endpoints
  double line_a = 0.0, line_b = 0.0, line_c = 0.0;
  Vec2 seg_start{}, seg_end{};
};

std::vector<RealTrace> extract_real_traces(const SpectralModel& model,
                                           double k,
                                           const TraceOptions& opt = {});

// dk <= 0 selects 1e-3 * max(k, 1).
int choose_bypass_sign(const RealTrace& trace, const SpectralModel& model,
                       double k, double dk = 0.0, int samples = 16);

std::vector<SpecialPoint> find_sos_points(const RealTrace& trace,
                                          const LatticeIndex& direction,
                                          const SpectralModel& model,
                                          double k);

std::vector<SpecialPoint> find_transverse_crossings(
    const std::vector<RealTrace>& traces, const SpectralModel& model,
    double k);

std::vector<SpecialPoint> find_flat_segments(const RealTrace& trace,
                                             const LatticeIndex& direction,
                                             const SpectralModel& model,
                                             double k);

std::vector<SpecialPoint> classify_special_points(
    const SpectralModel& model, double k, const LatticeIndex& direction,
    const TraceOptions& opt = {});

// Throws RegularityViolation when k is within the guard of a degenerate k.
void guard_degeneracy(const SpectralModel& model, double k, double tol);

}  // namespace blochfar
