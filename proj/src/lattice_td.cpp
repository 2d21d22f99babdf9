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

#include "blochfar/lattice_td.hpp"

#include <cmath>
#include <cstdlib>

namespace blochfar {

namespace {

// Laplacian on the quarter domain: mirror at index 0, zero beyond L-1.
void laplace(const std::vector<cplx>& u, int L, std::vector<cplx>& out) {
  auto at = [&](int i, int j) -> cplx {
    i = std::abs(i);
    j = std::abs(j);
    if (i >= L || j >= L) return 0.0;
    return u[static_cast<size_t>(i) * L + j];
  };
  for (int i = 0; i < L; ++i) {
    for (int j = 0; j < L; ++j) {
      out[static_cast<size_t>(i) * L + j] =
          at(i + 1, j) + at(i - 1, j) + at(i, j + 1) + at(i, j - 1) - 4.0 * at(i, j);
    }
  }
}

}  // namespace

LatticeTDResult lattice_time_domain(const LatticeTDOptions& o) {
  if (o.L < 4 || !(o.T > 0.0) || !(o.dt > 0.0) || !(o.c > 0.0) ||
      !(o.ramp_time >= 0.0)) {
    fail(ErrorCode::kInvalidArgument, "bad lattice time-domain options");
  }
  // Lattice spectrum reaches 8 c^2, so RK4 needs dt c sqrt(8) < 2 sqrt(2).
  if (o.dt * o.c >= 1.0) fail(ErrorCode::kInstability, "dt too large for RK4");
  for (const auto& m : o.observers) {
    if (std::abs(m.m1) >= o.L || std::abs(m.m2) >= o.L) {
      fail(ErrorCode::kInvalidArgument, "observer outside the domain");
    }
  }
  const int L = o.L;
  const size_t n = static_cast<size_t>(L) * L;
  const double c2 = o.c * o.c;
  std::vector<cplx> u(n, 0.0), v(n, 0.0), lu(n), us(n), vs(n);
  std::vector<cplx> ku[4], kv[4];
  for (int s = 0; s < 4; ++s) {
    ku[s].resize(n);
    kv[s].resize(n);
  }
  auto force = [&](double t) {
    double r = 1.0;
    if (o.ramp_time > 0.0 && t < o.ramp_time) r = 0.5 - 0.5 * std::cos(kPi * t / o.ramp_time);
    return std::exp(-kI * o.omega * t) * r;
  };
  auto rhs = [&](const std::vector<cplx>& uu, const std::vector<cplx>& vv, double t,
                 int s) {
    laplace(uu, L, lu);
    for (size_t q = 0; q < n; ++q) {
      ku[s][q] = vv[q];
      kv[s][q] = c2 * lu[q];
    }
    kv[s][0] -= c2 * force(t);
  };
  LatticeTDResult res;
  res.samples.resize(o.observers.size());
  const int steps = static_cast<int>(std::llround(o.T / o.dt));
  double t = 0.0;
  const double dt = o.dt;
  const double w[4] = {0.0, 0.5, 0.5, 1.0};
  for (int step = 0; step < steps; ++step) {
    for (int s = 0; s < 4; ++s) {
      if (s == 0) {
        rhs(u, v, t, 0);
        continue;
      }
      for (size_t q = 0; q < n; ++q) {
        us[q] = u[q] + w[s] * dt * ku[s - 1][q];
        vs[q] = v[q] + w[s] * dt * kv[s - 1][q];
      }
      rhs(us, vs, t + w[s] * dt, s);
    }
    for (size_t q = 0; q < n; ++q) {
      u[q] += dt / 6.0 * (ku[0][q] + 2.0 * ku[1][q] + 2.0 * ku[2][q] + ku[3][q]);
      v[q] += dt / 6.0 * (kv[0][q] + 2.0 * kv[1][q] + 2.0 * kv[2][q] + kv[3][q]);
    }
    t += dt;
    res.times.push_back(t);
    const cplx demod = std::exp(kI * o.omega * t);
    for (size_t k = 0; k < o.observers.size(); ++k) {
      const auto& m = o.observers[k];
      res.samples[k].push_back(
          u[static_cast<size_t>(std::abs(m.m1)) * L + std::abs(m.m2)] * demod);
    }
  }
  return res;
}

LogFit fit_log_growth(const std::vector<double>& t, const std::vector<double>& y,
                      double t_lo, double t_hi) {
  if (t.size() != y.size()) fail(ErrorCode::kInvalidArgument, "length mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  int n = 0;
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi || !(t[i] > 0.0)) continue;
    const double x = std::log(t[i]);
    sx += x;
    sy += y[i];
    sxx += x * x;
    sxy += x * y[i];
    syy += y[i] * y[i];
    ++n;
  }
  if (n < 3) fail(ErrorCode::kInvalidArgument, "too few samples for the fit");
  LogFit f;
  const double vx = sxx - sx * sx / n, cxy = sxy - sx * sy / n, vy = syy - sy * sy / n;
  if (!(vx > 0.0)) fail(ErrorCode::kInvalidArgument, "degenerate time window");
  f.b = cxy / vx;
  f.a = (sy - f.b * sx) / n;
  f.r2 = vy > 0.0 ? cxy * cxy / (vx * vy) : 1.0;
  return f;
}

}  // namespace blochfar
