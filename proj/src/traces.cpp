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

#include "blochfar/traces.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

namespace blochfar {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

struct Eval {
  const SpectralModel& model;
  int j;
  double k;

  double g(const Vec2& x, double kk) const {
    return model.defining_functions[j].g({x[0], x[1]}, {kk, 0.0}).real();
  }
  double g(const Vec2& x) const { return g(x, k); }
  Vec2 grad(const Vec2& x) const {
    const CVec2 d = model.defining_functions[j].grad({x[0], x[1]}, {k, 0.0});
    return {d[0].real(), d[1].real()};
  }
  Mat2 hessian(const Vec2& x) const {
    const auto& df = model.defining_functions[j];
    if (df.hessian) return df.hessian(x, k);
    // five-point differences of the analytic gradient
    const double h = 1e-4;
    Mat2 H{};
    for (int c = 0; c < 2; ++c) {
      auto at = [&](double t) {
        Vec2 y = x;
        y[c] += t;
        return grad(y);
      };
      const Vec2 p2 = at(2 * h), p1 = at(h), m1 = at(-h), m2 = at(-2 * h);
      for (int r = 0; r < 2; ++r) {
        H[r][c] = (-p2[r] + 8.0 * p1[r] - 8.0 * m1[r] + m2[r]) / (12.0 * h);
      }
    }
    H[0][1] = H[1][0] = 0.5 * (H[0][1] + H[1][0]);
    return H;
  }
};

double norm2(const Vec2& v) { return std::hypot(v[0], v[1]); }

double pdist(const Vec2& a, const Vec2& b, bool periodic) {
  double dx = a[0] - b[0], dy = a[1] - b[1];
  if (periodic) {
    dx = std::remainder(dx, kTwoPi);
    dy = std::remainder(dy, kTwoPi);
  }
  return std::hypot(dx, dy);
}

Vec2 wrap_point(const Vec2& x, bool periodic) {
  if (!periodic) return x;
  return {wrap_angle(x[0]), wrap_angle(x[1])};
}

bool full_zone(const TraceBox& b) {
  return b.x0 == -kPi && b.x1 == kPi && b.y0 == -kPi && b.y1 == kPi;
}

// Newton projection onto g = 0 along the gradient.
Vec2 polish(const Eval& ev, Vec2 x, const TraceOptions& opt) {
  for (int it = 0; it < 60; ++it) {
    const double g = ev.g(x);
    const Vec2 d = ev.grad(x);
    const double n2 = d[0] * d[0] + d[1] * d[1];
    if (std::sqrt(n2) < opt.regularity) {
      fail(ErrorCode::kRegularityViolation,
           "vanishing gradient on the trace near (" + std::to_string(x[0]) +
               ", " + std::to_string(x[1]) + ")");
    }
    if (std::abs(g) < 0.01 * opt.tol) break;
    x[0] -= g * d[0] / n2;
    x[1] -= g * d[1] / n2;
  }
  if (!(std::abs(ev.g(x)) < opt.tol)) {
    fail(ErrorCode::kRegularityViolation, "Newton polish did not converge");
  }
  if (norm2(ev.grad(x)) < opt.regularity) {
    fail(ErrorCode::kRegularityViolation, "vanishing gradient on the trace");
  }
  return x;
}

std::vector<RealTrace> contour(const Eval& ev, bool periodic,
                               const TraceOptions& opt) {
  const int n = opt.grid;
  const int W = n + 1;
  const TraceBox& b = opt.box;
  auto xc = [&](int i) { return b.x0 + (b.x1 - b.x0) * i / n; };
  auto yc = [&](int j) { return b.y0 + (b.y1 - b.y0) * j / n; };
  std::vector<double> v(static_cast<size_t>(W) * W);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const int ii = periodic ? i % n : i, jj = periodic ? j % n : j;
      v[static_cast<size_t>(j) * W + i] = ev.g({xc(ii), yc(jj)});
    }
  }
  auto val = [&](int i, int j) { return v[static_cast<size_t>(j) * W + i]; };
  auto hid = [&](int i, int j) -> long {
    return 2L * ((periodic ? j % n : j) * static_cast<long>(W) + i);
  };
  auto vid = [&](int i, int j) -> long {
    return 2L * (j * static_cast<long>(W) + (periodic ? i % n : i)) + 1;
  };
  std::unordered_map<long, Vec2> pos;
  auto edge_point = [&](long id, int i0, int j0, int i1, int j1) {
    if (pos.count(id)) return;
    const double a = val(i0, j0), c = val(i1, j1);
    const double t = a / (a - c);
    pos[id] = {xc(i0) + t * (xc(i1) - xc(i0)), yc(j0) + t * (yc(j1) - yc(j0))};
  };
  std::vector<std::pair<long, long>> segs;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double c[4] = {val(i, j), val(i + 1, j), val(i + 1, j + 1),
                           val(i, j + 1)};
      const bool p[4] = {c[0] > 0, c[1] > 0, c[2] > 0, c[3] > 0};
      const long e[4] = {hid(i, j), vid(i + 1, j), hid(i, j + 1), vid(i, j)};
      bool cut[4] = {p[0] != p[1], p[1] != p[2], p[3] != p[2], p[0] != p[3]};
      if (cut[0]) edge_point(e[0], i, j, i + 1, j);
      if (cut[1]) edge_point(e[1], i + 1, j, i + 1, j + 1);
      if (cut[2]) edge_point(e[2], i, j + 1, i + 1, j + 1);
      if (cut[3]) edge_point(e[3], i, j, i, j + 1);
      const int nc = cut[0] + cut[1] + cut[2] + cut[3];
      if (nc == 2) {
        long ab[2];
        int q = 0;
        for (int s = 0; s < 4; ++s) {
          if (cut[s]) ab[q++] = e[s];
        }
        segs.push_back({ab[0], ab[1]});
      } else if (nc == 4) {
        const bool centre = 0.25 * (c[0] + c[1] + c[2] + c[3]) > 0;
        if (centre == p[0]) {
          segs.push_back({e[0], e[1]});
          segs.push_back({e[2], e[3]});
        } else {
          segs.push_back({e[3], e[0]});
          segs.push_back({e[1], e[2]});
        }
      }
    }
  }
  std::unordered_map<long, std::vector<int>> by_edge;
  for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
    by_edge[segs[s].first].push_back(s);
    by_edge[segs[s].second].push_back(s);
  }
  std::vector<char> used(segs.size(), 0);
  std::vector<RealTrace> out;
  auto walk = [&](int s0, long start) {
    RealTrace tr;
    tr.defining_index = ev.j;
    long cur = start;
    int s = s0;
    tr.points.push_back(pos[cur]);
    while (true) {
      used[s] = 1;
      const long nxt = segs[s].first == cur ? segs[s].second : segs[s].first;
      if (nxt == start) {
        tr.closed = true;
        break;
      }
      tr.points.push_back(pos[nxt]);
      cur = nxt;
      int ns = -1;
      for (int c : by_edge[cur]) {
        if (!used[c]) ns = c;
      }
      if (ns < 0) break;
      s = ns;
    }
    out.push_back(std::move(tr));
  };
  // open chains first, from their ends; then loops
  std::vector<long> ends;
  for (auto& [id, list] : by_edge) {
    if (list.size() == 1) ends.push_back(id);
  }
  std::sort(ends.begin(), ends.end());
  for (long id : ends) {
    const int s = by_edge[id][0];
    if (!used[s]) walk(s, id);
  }
  for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
    if (!used[s]) walk(s, segs[s].first);
  }
  for (auto& tr : out) {
    for (auto& p : tr.points) p = wrap_point(polish(ev, p, opt), periodic);
  }
  return out;
}

}  // namespace

void guard_degeneracy(const SpectralModel& model, double k, double tol) {
  for (double kd : model.degenerate_k) {
    if (std::abs(k - kd) < tol) {
      fail(ErrorCode::kRegularityViolation,
           "k = " + std::to_string(k) + " is a degenerate wavenumber (" +
               std::to_string(kd) + "); use the degeneracy module");
    }
  }
}

std::vector<RealTrace> extract_real_traces(const SpectralModel& model,
                                           double k, const TraceOptions& opt) {
  if (!(k >= 0.0)) fail(ErrorCode::kInvalidArgument, "k must be >= 0");
  if (opt.grid < 8) fail(ErrorCode::kInvalidArgument, "grid too small");
  guard_degeneracy(model, k, opt.degeneracy_guard);
  const bool periodic = model.periodic && full_zone(opt.box);
  std::vector<RealTrace> all;
  for (int j = 0; j < static_cast<int>(model.defining_functions.size()); ++j) {
    Eval ev{model, j, k};
    auto t = contour(ev, periodic, opt);
    all.insert(all.end(), t.begin(), t.end());
  }
  return all;
}

int choose_bypass_sign(const RealTrace& trace, const SpectralModel& model,
                       double k, double dk, int samples) {
  if (trace.points.empty()) {
    fail(ErrorCode::kInvalidArgument, "empty trace");
  }
  if (!(dk > 0.0)) dk = 1e-3 * std::max(k, 1.0);
  Eval ev{model, trace.defining_index, k};
  const int np = static_cast<int>(trace.points.size());
  const int ns = std::min(np, std::max(samples, 8));
  int sign = 0;
  for (int q = 0; q < ns; ++q) {
    const Vec2 x = trace.points[static_cast<size_t>(q) * np / ns];
    const Vec2 d = ev.grad(x);
    const double nd = norm2(d);
    if (nd < 1e-8) {
      fail(ErrorCode::kInconsistentOrientation, "vanishing gradient");
    }
    const Vec2 n{d[0] / nd, d[1] / nd};
    // displacement of the trace at k + dk along the normal
    double t = 0.0;
    for (int it = 0; it < 30; ++it) {
      const Vec2 y{x[0] + t * n[0], x[1] + t * n[1]};
      const double g = ev.g(y, k + dk);
      const Vec2 gy = ev.grad(y);
      const double slope = gy[0] * n[0] + gy[1] * n[1];
      if (std::abs(slope) < 1e-14) break;
      const double step = g / slope;
      t -= step;
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(t))) break;
    }
    const double thresh = 1e-6 * dk;
    const int sq = t > thresh ? -1 : (t < -thresh ? 1 : 0);
    if (sq == 0 || (sign != 0 && sq != sign)) {
      fail(ErrorCode::kInconsistentOrientation,
           "group-velocity rule gives no consistent side along the trace");
    }
    sign = sq;
  }
  return sign;
}

std::vector<SpecialPoint> find_sos_points(const RealTrace& trace,
                                          const LatticeIndex& direction,
                                          const SpectralModel& model,
                                          double k) {
  if (direction.m1 == 0 && direction.m2 == 0) {
    fail(ErrorCode::kInvalidArgument, "direction must be nonzero");
  }
  if (trace.bypass_sign == 0) {
    fail(ErrorCode::kInvalidArgument, "trace has no bypass sign");
  }
  const double mn = direction.norm();
  const Vec2 mt{direction.m1 / mn, direction.m2 / mn};
  Eval ev{model, trace.defining_index, k};
  const bool periodic = model.periodic;
  const int np = static_cast<int>(trace.points.size());
  std::vector<double> f(np);
  for (int i = 0; i < np; ++i) {
    const Vec2 d = ev.grad(trace.points[i]);
    f[i] = (mt[1] * d[0] - mt[0] * d[1]) / norm2(d);
  }
  std::vector<SpecialPoint> out;
  const int last = trace.closed ? np : np - 1;
  for (int i = 0; i < last; ++i) {
    const int i2 = (i + 1) % np;
    if (!(f[i] * f[i2] <= 0.0)) continue;
    if (f[i] == 0.0 && f[i2] == 0.0) continue;
    // start between the samples, unwrapping across the zone edge
    Vec2 a = trace.points[i], b = trace.points[i2];
    if (periodic) {
      b[0] = a[0] + std::remainder(b[0] - a[0], kTwoPi);
      b[1] = a[1] + std::remainder(b[1] - a[1], kTwoPi);
    }
    const double t = f[i] == f[i2] ? 0.5 : f[i] / (f[i] - f[i2]);
    Vec2 x{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
    bool ok = false;
    for (int it = 0; it < 50; ++it) {
      const double g = ev.g(x);
      const Vec2 d = ev.grad(x);
      const Mat2 H = ev.hessian(x);
      const double r2 = mt[1] * d[0] - mt[0] * d[1];
      if (std::abs(g) < 1e-14 && std::abs(r2) < 1e-13 * norm2(d)) {
        ok = true;
        break;
      }
      const double j11 = d[0], j12 = d[1];
      const double j21 = mt[1] * H[0][0] - mt[0] * H[1][0];
      const double j22 = mt[1] * H[0][1] - mt[0] * H[1][1];
      const double det = j11 * j22 - j12 * j21;
      if (std::abs(det) < 1e-300) break;
      x[0] -= (g * j22 - j12 * r2) / det;
      x[1] -= (j11 * r2 - j21 * g) / det;
    }
    if (!ok) {
      const Vec2 d = ev.grad(x);
      ok = std::abs(ev.g(x)) < 1e-10 &&
           std::abs(mt[1] * d[0] - mt[0] * d[1]) < 1e-9 * norm2(d);
    }
    if (!ok) continue;
    x = wrap_point(x, periodic);
    const Vec2 d = ev.grad(x);
    if (!(trace.bypass_sign * (mt[0] * d[0] + mt[1] * d[1]) > 0.0)) continue;
    bool dup = false;
    for (const auto& p : out) {
      if (pdist(p.location, x, periodic) < 1e-7) dup = true;
    }
    if (dup) continue;
    SpecialPoint sp;
    sp.kind = SpecialKind::kSoS;
    sp.location = x;
    sp.grad = d;
    sp.grad_norm = norm2(d);
    sp.normal = {d[0] / sp.grad_norm, d[1] / sp.grad_norm};
    sp.s = trace.bypass_sign;
    const Mat2 H = ev.hessian(x);
    const double u0 = d[1], u1 = -d[0];
    const double quad = u0 * (H[0][0] * u0 + H[0][1] * u1) +
                        u1 * (H[1][0] * u0 + H[1][1] * u1);
    const double q2 = sp.grad_norm * sp.grad_norm;
    sp.alpha = -0.5 * quad / (q2 * q2);
    if (std::abs(sp.alpha) < 1e-9) {
      fail(ErrorCode::kZeroCurvature,
           "SoS with vanishing curvature; use the flat-segment path");
    }
    out.push_back(sp);
  }
  return out;
}

std::vector<SpecialPoint> find_transverse_crossings(
    const std::vector<RealTrace>& traces, const SpectralModel& model,
    double k) {
  const bool periodic = model.periodic;
  auto spacing = [&](const RealTrace& t) {
    double s = 0.0;
    for (size_t i = 0; i + 1 < t.points.size(); ++i) {
      s = std::max(s, pdist(t.points[i], t.points[i + 1], periodic));
    }
    return s;
  };
  std::vector<SpecialPoint> out;
  for (size_t A = 0; A < traces.size(); ++A) {
    for (size_t B = A + 1; B < traces.size(); ++B) {
      const auto& ta = traces[A];
      const auto& tb = traces[B];
      if (ta.defining_index == tb.defining_index) continue;
      Eval e1{model, ta.defining_index, k}, e2{model, tb.defining_index, k};
      const double thr = 2.0 * std::max(spacing(ta), spacing(tb)) + 1e-12;
      for (const auto& p : ta.points) {
        for (const auto& q : tb.points) {
          if (pdist(p, q, periodic) > thr) continue;
          Vec2 x = p;
          for (int it = 0; it < 200; ++it) {
            const double g1 = e1.g(x), g2 = e2.g(x);
            if (std::abs(g1) < 1e-15 && std::abs(g2) < 1e-15) break;
            const Vec2 d1 = e1.grad(x), d2 = e2.grad(x);
            const double det = d1[0] * d2[1] - d1[1] * d2[0];
            if (std::abs(det) < 1e-300) break;
            x[0] -= (g1 * d2[1] - d1[1] * g2) / det;
            x[1] -= (d1[0] * g2 - d2[0] * g1) / det;
          }
          if (!(std::abs(e1.g(x)) < 1e-12 && std::abs(e2.g(x)) < 1e-12)) {
            continue;
          }
          x = wrap_point(x, periodic);
          bool dup = false;
          for (const auto& c : out) {
            if (pdist(c.location, x, periodic) < 1e-6 &&
                ((c.index1 == static_cast<int>(A) &&
                  c.index2 == static_cast<int>(B)) ||
                 (c.index1 == static_cast<int>(B) &&
                  c.index2 == static_cast<int>(A)))) {
              dup = true;
            }
          }
          if (dup) continue;
          SpecialPoint sp;
          sp.kind = SpecialKind::kTransverseCrossing;
          sp.location = x;
          sp.grad1 = e1.grad(x);
          sp.grad2 = e2.grad(x);
          sp.s1 = ta.bypass_sign;
          sp.s2 = tb.bypass_sign;
          sp.index1 = static_cast<int>(A);
          sp.index2 = static_cast<int>(B);
          sp.delta = sp.grad1[0] * sp.grad2[1] - sp.grad2[0] * sp.grad1[1];
          if (std::abs(sp.delta) < 1e-6 * norm2(sp.grad1) * norm2(sp.grad2)) {
            fail(ErrorCode::kTangentialCrossing,
                 "traces meet with parallel gradients");
          }
          if (sp.delta < 0.0) {
            std::swap(sp.grad1, sp.grad2);
            std::swap(sp.s1, sp.s2);
            std::swap(sp.index1, sp.index2);
            sp.delta = -sp.delta;
          }
          out.push_back(sp);
        }
      }
    }
  }
  return out;
}

std::vector<SpecialPoint> find_flat_segments(const RealTrace& trace,
                                             const LatticeIndex& direction,
                                             const SpectralModel& model,
                                             double k) {
  const double mn = direction.norm();
  if (mn == 0.0) fail(ErrorCode::kInvalidArgument, "direction is zero");
  const Vec2 mt{direction.m1 / mn, direction.m2 / mn};
  Eval ev{model, trace.defining_index, k};
  const int np = static_cast<int>(trace.points.size());
  std::vector<SpecialPoint> out;
  int i = 0;
  while (i + 4 < np) {
    const Vec2 a = trace.points[i];
    const Vec2 d0 = ev.grad(a);
    const double nd = norm2(d0);
    const Vec2 nrm{d0[0] / nd, d0[1] / nd};
    int j = i + 1;
    double len = 0.0;
    while (j < np) {
      const Vec2& p = trace.points[j];
      const double dev = std::abs((p[0] - a[0]) * nrm[0] + (p[1] - a[1]) * nrm[1]);
      const Vec2 dj = ev.grad(p);
      const double turn = std::abs(nrm[0] * dj[1] - nrm[1] * dj[0]) / norm2(dj);
      const double l = std::hypot(p[0] - a[0], p[1] - a[1]);
      if (dev > 1e-9 * std::max(l, 1e-3) || turn > 1e-9) break;
      len = l;
      ++j;
    }
    if (j - i >= 5 && len > 0.0) {
      const double perp = std::abs(mt[0] * nrm[1] - mt[1] * nrm[0]);
      if (perp < 1e-8 &&
          trace.bypass_sign * (mt[0] * d0[0] + mt[1] * d0[1]) > 0.0) {
        SpecialPoint sp;
        sp.kind = SpecialKind::kFlatSegment;
        sp.location = a;
        sp.seg_start = a;
        sp.seg_end = trace.points[j - 1];
        sp.line_a = d0[0];
        sp.line_b = d0[1];
        sp.line_c = -(d0[0] * a[0] + d0[1] * a[1]);
        sp.grad = d0;
        sp.grad_norm = nd;
        sp.normal = nrm;
        sp.s = trace.bypass_sign;
        out.push_back(sp);
      }
      i = j - 1;
    } else {
      ++i;
    }
  }
  return out;
}

std::vector<SpecialPoint> classify_special_points(
    const SpectralModel& model, double k, const LatticeIndex& direction,
    const TraceOptions& opt) {
  auto traces = extract_real_traces(model, k, opt);
  std::vector<SpecialPoint> out;
  for (size_t t = 0; t < traces.size(); ++t) {
    try {
      traces[t].bypass_sign = choose_bypass_sign(traces[t], model, k);
      auto flat = find_flat_segments(traces[t], direction, model, k);
      for (auto& f : flat) f.trace_index = static_cast<int>(t);
      out.insert(out.end(), flat.begin(), flat.end());
      if (flat.empty()) {
        auto sos = find_sos_points(traces[t], direction, model, k);
        for (auto& s : sos) s.trace_index = static_cast<int>(t);
        out.insert(out.end(), sos.begin(), sos.end());
      }
    } catch (const Error& e) {
      fail(e.code(), "trace " + std::to_string(t) + ": " + e.what());
    }
  }
  auto cross = find_transverse_crossings(traces, model, k);
  out.insert(out.end(), cross.begin(), cross.end());
  return out;
}

}  // namespace blochfar
