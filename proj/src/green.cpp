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

#include <algorithm>
#include <cmath>
#include <string>

#include "blochfar/integrate.hpp"

namespace blochfar {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

struct Axis {
  std::vector<double> x, w;
};

Axis make_axis(int n, QuadratureRule rule) {
  Axis a;
  if (rule == QuadratureRule::kTrapezoidPeriodic) {
    a.x.resize(n);
    a.w.assign(n, kTwoPi / n);
    for (int j = 0; j < n; ++j) a.x[j] = -kPi + kTwoPi * j / n;
  } else {
    gauss_legendre(n, a.x, a.w);
    for (int j = 0; j < n; ++j) {
      a.x[j] *= kPi;
      a.w[j] *= kPi;
    }
  }
  return a;
}

cplx tensor_kappa(const LatticeIndex& m, cplx w, const Axis& a1,
                  const Axis& a2) {
  const size_t n1 = a1.x.size(), n2 = a2.x.size();
  std::vector<double> c2(n2);
  std::vector<cplx> e2(n2);
  for (size_t j = 0; j < n2; ++j) {
    c2[j] = 2.0 * std::cos(a2.x[j]);
    e2[j] = a2.w[j] * std::exp(-kI * (static_cast<double>(m.m2) * a2.x[j]));
  }
  const cplx shift = w * w - 4.0;
  std::vector<cplx> rows(n1), buf(n2);
  for (size_t i = 0; i < n1; ++i) {
    const cplx base = 2.0 * std::cos(a1.x[i]) + shift;
    for (size_t j = 0; j < n2; ++j) buf[j] = e2[j] / (base + c2[j]);
    rows[i] = pairwise_sum(buf) * a1.w[i] *
              std::exp(-kI * (static_cast<double>(m.m1) * a1.x[i]));
  }
  return pairwise_sum(rows) / (4.0 * kPi * kPi);
}

// Transition abscissae in [0, pi] where 2 cos xi1 + k^2 - 4 = -2 or +2.
std::vector<double> transition_points(double k) {
  std::vector<double> t;
  const double ca = (2.0 - k * k) / 2.0;
  const double cb = (6.0 - k * k) / 2.0;
  if (ca > -1.0 && ca < 1.0) t.push_back(std::acos(ca));
  if (cb > -1.0 && cb < 1.0) t.push_back(std::acos(cb));
  std::sort(t.begin(), t.end());
  return t;
}

std::vector<double> panel_breaks(double a, double b, double max_len) {
  const int n = std::max(1, static_cast<int>(std::ceil((b - a) / max_len)));
  std::vector<double> br(n + 1);
  for (int i = 0; i <= n; ++i) br[i] = a + (b - a) * i / n;
  br[n] = b;
  return br;
}

cplx adaptive_kappa(const LatticeIndex& m, cplx w, double k,
                    const QuadratureOptions& opt, double& err) {
  const double m1 = std::abs(static_cast<double>(m.m1));
  const double m2 = std::abs(static_cast<double>(m.m2));
  const cplx shift = w * w - 4.0;
  double inner_err_acc = 0.0;
  auto outer = [&](double x1) -> cplx {
    const cplx a = 2.0 * std::cos(x1) + shift;
    auto inner = [&](double x2) -> cplx {
      return std::cos(m2 * x2) / (a + 2.0 * std::cos(x2));
    };
    std::vector<double> br{0.0};
    const double c = -a.real() / 2.0;
    if (c > -1.0 && c < 1.0) br.push_back(std::acos(c));
    br.push_back(kPi);
    const double len = kPi / std::max(2.0, m2 / 2.0);
    std::vector<double> all;
    for (size_t i = 0; i + 1 < br.size(); ++i) {
      auto p = panel_breaks(br[i], br[i + 1], len);
      all.insert(all.end(), p.begin() + (all.empty() ? 0 : 1), p.end());
    }
    QuadResult r = integrate_adaptive(inner, all, opt.adaptive_abs_tol,
                                      0.01 * opt.adaptive_rel_tol, 20000);
    inner_err_acc = std::max(inner_err_acc, r.error);
    if (!r.converged) {
      fail(ErrorCode::kNonconvergentQuadrature, "inner adaptive rule");
    }
    return r.value * std::cos(m1 * x1);
  };
  std::vector<double> br{0.0};
  for (double t : transition_points(k)) br.push_back(t);
  br.push_back(kPi);
  const double len = kPi / std::max(2.0, m1 / 2.0);
  std::vector<double> all;
  for (size_t i = 0; i + 1 < br.size(); ++i) {
    auto p = panel_breaks(br[i], br[i + 1], len);
    all.insert(all.end(), p.begin() + (all.empty() ? 0 : 1), p.end());
  }
  QuadResult r = integrate_adaptive(outer, all, opt.adaptive_abs_tol,
                                    opt.adaptive_rel_tol, 20000);
  if (!r.converged) {
    fail(ErrorCode::kNonconvergentQuadrature, "outer adaptive rule");
  }
  err = (r.error + kPi * inner_err_acc) / (kPi * kPi);
  return r.value / (kPi * kPi);
}

// Neville evaluation at 0 of the interpolant through (x[i], y[i]).
cplx neville_at_zero(const std::vector<double>& x, const std::vector<cplx>& y) {
  std::vector<cplx> p = y;
  const size_t n = x.size();
  for (size_t lev = 1; lev < n; ++lev) {
    for (size_t i = 0; i + lev < n; ++i) {
      const double xi = x[i], xj = x[i + lev];
      p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
    }
  }
  return p[0];
}

}  // namespace

void QuadratureGrid::validate() const {
  if (n1 < 8 || n2 < 8) {
    fail(ErrorCode::kInvalidArgument, "grid needs at least 8 points per axis");
  }
  if (rule == QuadratureRule::kTrapezoidPeriodic && (n1 % 2 || n2 % 2)) {
    fail(ErrorCode::kInvalidArgument, "trapezoid grid sizes must be even");
  }
}

bool lattice_near_degenerate(double k, double tol) {
  return std::abs(k) < tol || std::abs(k - 2.0) < tol ||
         std::abs(k - 2.0 * std::sqrt(2.0)) < tol;
}

GreenValue green_kappa_regularized(const LatticeIndex& m, double k,
                                   double kappa, const QuadratureGrid& grid,
                                   const QuadratureOptions& opt) {
  grid.validate();
  if (!(kappa > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "kappa must be positive");
  }
  const cplx w(k, kappa);
  if (grid.rule == QuadratureRule::kAdaptive) {
    double err = 0.0;
    const cplx v = adaptive_kappa(m, w, k, opt, err);
    return {v, err};
  }
  int n1 = grid.n1, n2 = grid.n2;
  cplx prev = tensor_kappa(m, w, make_axis(n1, grid.rule),
                           make_axis(n2, grid.rule));
  for (int d = 0; d < opt.max_doublings; ++d) {
    n1 *= 2;
    n2 *= 2;
    const cplx cur = tensor_kappa(m, w, make_axis(n1, grid.rule),
                                  make_axis(n2, grid.rule));
    const double diff = std::abs(cur - prev);
    if (diff <= opt.rel_tol * std::abs(cur) || diff < 1e-300) {
      return {cur, diff};
    }
    prev = cur;
  }
  fail(ErrorCode::kNonconvergentQuadrature,
       "grid doubling did not converge for kappa=" + std::to_string(kappa));
}

std::vector<double> default_kappa_ladder(const LatticeIndex& m) {
  const double k0 = std::min(0.1, 0.4 / std::max(1.0, m.norm()));
  std::vector<double> l;
  for (int i = 0; i < 5; ++i) l.push_back(k0 / std::pow(2.0, i));
  return l;
}

ExtrapolationResult kappa_extrapolate(const LatticeIndex& m, double k,
                                      std::vector<double> ladder,
                                      QuadratureGrid grid,
                                      const QuadratureOptions& opt) {
  if (ladder.empty()) ladder = default_kappa_ladder(m);
  if (ladder.size() < 3) {
    fail(ErrorCode::kInvalidArgument, "kappa ladder needs at least 3 values");
  }
  for (size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] > 0.0) || (i > 0 && !(ladder[i] < ladder[i - 1]))) {
      fail(ErrorCode::kInvalidArgument,
           "kappa ladder must be positive and strictly decreasing");
    }
  }
  ExtrapolationResult r;
  r.ladder = ladder;
  for (double kap : ladder) {
    r.samples.push_back(green_kappa_regularized(m, k, kap, grid, opt).value);
  }
  // Extrapolants of increasing degree built from the smallest kappas.
  const size_t n = ladder.size();
  for (size_t p = 1; p <= n; ++p) {
    std::vector<double> x(ladder.end() - p, ladder.end());
    std::vector<cplx> y(r.samples.end() - p, r.samples.end());
    r.extrapolants.push_back(neville_at_zero(x, y));
  }
  r.value = r.extrapolants.back();
  const double d1 = std::abs(r.extrapolants[n - 1] - r.extrapolants[n - 2]);
  const double d2 = std::abs(r.extrapolants[n - 2] - r.extrapolants[n - 3]);
  r.error = d1;
  const double scale = std::max(std::abs(r.value), 1e-300);
  if (d1 > 0.5 * d2 && d1 > 1e-9 * scale) {
    fail(ErrorCode::kExtrapolationDiverged,
         "extrapolants do not contract (ratio " + std::to_string(d1 / d2) +
             ")");
  }
  if (d1 > 1e-3 * scale) {
    fail(ErrorCode::kExtrapolationDiverged,
         "extrapolation error estimate too large");
  }
  return r;
}

DeformedSurface lattice_explicit_surface(double k, int pm, double amplitude) {
  const double s = pm >= 0 ? 1.0 : -1.0;
  const double shift = k * k - 4.0;
  DeformedSurface d;
  d.amplitude = amplitude;
  d.eta = [=](const Vec2& x) -> Vec2 {
    const double g = 2.0 * std::cos(x[0]) + 2.0 * std::cos(x[1]) + shift;
    const double e = s * std::exp(-g * g);
    return {e * std::sin(x[0]), e * std::sin(x[1])};
  };
  d.jacobian = [=](const Vec2& x) -> Mat2 {
    const double g = 2.0 * std::cos(x[0]) + 2.0 * std::cos(x[1]) + shift;
    const double e = s * std::exp(-g * g);
    const double v[2] = {std::sin(x[0]), std::sin(x[1])};
    const double dg[2] = {-2.0 * v[0], -2.0 * v[1]};
    const double c[2] = {std::cos(x[0]), std::cos(x[1])};
    Mat2 j{};
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        j[a][b] = e * (-2.0 * g * dg[b] * v[a] + (a == b ? c[a] : 0.0));
      }
    }
    return j;
  };
  return d;
}

DeformedSurface lattice_bypass_surface(double k, int bypass_sign,
                                       double amplitude) {
  // grad g = -2 (sin xi1, sin xi2): a positive bypass sign is pm = -1.
  return lattice_explicit_surface(k, bypass_sign >= 0 ? -1 : 1, amplitude);
}

SurfaceReport check_surface(const DeformedSurface& s, double k, int n) {
  SurfaceReport rep;
  rep.amplitude = s.amplitude;
  const double eps = s.amplitude;
  const double h = 2.0 * kPi / n;
  for (int i = 0; i < n; ++i) {
    const double x1 = -kPi + h * i;
    // periodicity across the zone edges
    const Vec2 a = s.eta({x1, -kPi}), b = s.eta({x1, kPi});
    const Vec2 c = s.eta({-kPi, x1}), d = s.eta({kPi, x1});
    if (std::abs(a[0] - b[0]) + std::abs(a[1] - b[1]) +
            std::abs(c[0] - d[0]) + std::abs(c[1] - d[1]) >
        1e-12) {
      fail(ErrorCode::kInadmissibleSurface, "eta is not 2pi-periodic");
    }
    for (int j = 0; j < n; ++j) {
      const Vec2 x{x1, -kPi + h * j};
      const Vec2 e = s.eta(x);
      const double ne = std::hypot(e[0], e[1]);
      rep.max_eps_eta = std::max(rep.max_eps_eta, eps * ne);
      const double g =
          2.0 * std::cos(x[0]) + 2.0 * std::cos(x[1]) + k * k - 4.0;
      const double gr[2] = {-2.0 * std::sin(x[0]), -2.0 * std::sin(x[1])};
      const double ng = std::hypot(gr[0], gr[1]);
      if (ng > 1e-8 && std::abs(g) < 0.5 * ng * h) {
        // node next to a real trace: eta must cross it
        const double tr =
            ne > 0.0 ? std::abs(e[0] * gr[0] + e[1] * gr[1]) / (ne * ng) : 0.0;
        rep.min_transversality = std::min(rep.min_transversality, tr);
      }
    }
  }
  if (rep.max_eps_eta > 0.5) {
    fail(ErrorCode::kInadmissibleSurface, "eps*|eta| exceeds 0.5");
  }
  if (rep.min_transversality < 1e-3) {
    fail(ErrorCode::kInadmissibleSurface,
         "eta vanishes or is tangent at a real trace");
  }
  return rep;
}

namespace {

struct SurfaceNodes {
  std::vector<cplx> z1, z2, weight;  // weight = F * det * quadrature weight
};

SurfaceNodes surface_nodes(double k, const DeformedSurface& s, double eps,
                           const Axis& a1, const Axis& a2, bool& hit) {
  SurfaceNodes sn;
  const size_t n = a1.x.size() * a2.x.size();
  sn.z1.reserve(n);
  sn.z2.reserve(n);
  sn.weight.reserve(n);
  hit = false;
  const Wavenumber kk{k, 0.0};
  for (size_t i = 0; i < a1.x.size(); ++i) {
    for (size_t j = 0; j < a2.x.size(); ++j) {
      const Vec2 x{a1.x[i], a2.x[j]};
      const Vec2 e = s.eta(x);
      const Mat2 J = s.jacobian(x);
      const cplx z1(x[0], eps * e[0]), z2(x[1], eps * e[1]);
      const cplx den = lattice_denominator({z1, z2}, kk);
      if (std::abs(den) < 1e-6) hit = true;
      const cplx det = (1.0 + kI * eps * J[0][0]) * (1.0 + kI * eps * J[1][1]) +
                       eps * eps * J[0][1] * J[1][0];
      sn.z1.push_back(z1);
      sn.z2.push_back(z2);
      sn.weight.push_back(det / den * a1.w[i] * a2.w[j]);
    }
  }
  return sn;
}

cplx surface_sum(const SurfaceNodes& sn, const LatticeIndex& m) {
  std::vector<cplx> t(sn.z1.size());
  const double m1 = static_cast<double>(m.m1), m2 = static_cast<double>(m.m2);
  for (size_t q = 0; q < t.size(); ++q) {
    t[q] = sn.weight[q] * std::exp(-kI * (m1 * sn.z1[q] + m2 * sn.z2[q]));
  }
  return pairwise_sum(t) / (4.0 * kPi * kPi);
}

}  // namespace

std::vector<GreenValue> green_deformed_surface_many(
    const std::vector<LatticeIndex>& ms, double k,
    const DeformedSurface& surface, const QuadratureGrid& grid,
    const QuadratureOptions& opt) {
  grid.validate();
  if (grid.rule == QuadratureRule::kAdaptive) {
    fail(ErrorCode::kInvalidArgument, "deformed surface needs a tensor rule");
  }
  DeformedSurface s = surface;
  bool automatic = !(s.amplitude > 0.0);
  if (automatic) s.amplitude = 0.2;
  check_surface(s, k, 64);
  for (int attempt = 0;; ++attempt) {
    bool hit = false;
    int n1 = grid.n1, n2 = grid.n2;
    auto nodes = surface_nodes(k, s, s.amplitude, make_axis(n1, grid.rule),
                               make_axis(n2, grid.rule), hit);
    std::vector<cplx> prev(ms.size());
    for (size_t q = 0; q < ms.size(); ++q) prev[q] = surface_sum(nodes, ms[q]);
    std::vector<GreenValue> out(ms.size());
    bool done = false;
    for (int d = 0; d < opt.max_doublings && !hit; ++d) {
      n1 *= 2;
      n2 *= 2;
      nodes = surface_nodes(k, s, s.amplitude, make_axis(n1, grid.rule),
                            make_axis(n2, grid.rule), hit);
      if (hit) break;
      bool ok = true;
      for (size_t q = 0; q < ms.size(); ++q) {
        const cplx cur = surface_sum(nodes, ms[q]);
        const double diff = std::abs(cur - prev[q]);
        out[q] = {cur, diff};
        if (diff > opt.rel_tol * std::abs(cur) && diff > 1e-300) ok = false;
        prev[q] = cur;
      }
      if (ok) {
        done = true;
        break;
      }
    }
    if (done) return out;
    if (hit) {
      if (!automatic || attempt >= 6) {
        fail(ErrorCode::kSurfaceHitsSingularity,
             "a quadrature node lies on the polar set");
      }
      s.amplitude *= 0.5;
      continue;
    }
    fail(ErrorCode::kNonconvergentQuadrature,
         "deformed-surface quadrature did not converge");
  }
}

GreenValue green_deformed_surface(const LatticeIndex& m, double k,
                                  const DeformedSurface& surface,
                                  const QuadratureGrid& grid,
                                  const QuadratureOptions& opt) {
  return green_deformed_surface_many({m}, k, surface, grid, opt).front();
}

GreenValue green_residue_series(const LatticeIndex& m, double k,
                                double rel_tol) {
  if (lattice_near_degenerate(k)) {
    fail(ErrorCode::kDegenerateWavenumber,
         "k is at a degeneracy of the lattice (0, 2, 2*sqrt(2))");
  }
  // u is even in m1 and m2; use |m1| and -|m2|.
  const double m1 = std::abs(static_cast<double>(m.m1));
  const double am2 = std::abs(static_cast<double>(m.m2));
  const double c0 = (4.0 - k * k) / 2.0;
  const double ca = c0 - 1.0;  // cos of the c = +1 transition
  const double cb = c0 + 1.0;  // cos of the c = -1 transition
  const bool has_a = ca > -1.0 && ca < 1.0;
  const bool has_b = cb > -1.0 && cb < 1.0;
  const double xa = has_a ? std::acos(ca) : 0.0;
  const double xb = has_b ? std::acos(cb) : 0.0;

  std::vector<double> br{0.0};
  if (has_a) br.push_back(xa);
  if (has_b) br.push_back(xb);
  br.push_back(kPi);
  std::sort(br.begin(), br.end());

  const double osc = m1 + am2 + 4.0;
  const double max_len = std::max(0.05, 4.0 / osc);
  cplx total = 0.0;
  double err = 0.0;
  for (size_t s = 0; s + 1 < br.size(); ++s) {
    const auto panels = panel_breaks(br[s], br[s + 1], max_len);
    for (size_t p = 0; p + 1 < panels.size(); ++p) {
      const double pa = panels[p], pb = panels[p + 1];
      auto f = [&](double x, double da, double db) -> cplx {
        // signed offsets from the transition points, exact near panel ends
        auto offset = [&](double t) {
          if (t == pa) return da;
          if (t == pb) return -db;
          return x - t;
        };
        const double cm1 = has_a
                               ? 2.0 * std::sin(0.5 * (x + xa)) *
                                     std::sin(0.5 * offset(xa))
                               : c0 - std::cos(x) - 1.0;
        const double cp1 = has_b
                               ? 2.0 * std::sin(0.5 * (x + xb)) *
                                     std::sin(0.5 * offset(xb))
                               : c0 - std::cos(x) + 1.0;
        const double c = c0 - std::cos(x);
        cplx xi, sinx;
        const double prod = std::max(0.0, -cm1 * cp1);  // 1 - c^2
        if (cm1 <= 0.0 && cp1 >= 0.0) {
          const double s2 = std::sqrt(prod);
          xi = (c >= 0.0) ? 2.0 * std::asin(std::sqrt(std::max(0.0, -cm1) / 2.0))
                          : kPi - 2.0 * std::asin(std::sqrt(std::max(0.0, cp1) / 2.0));
          sinx = s2;
        } else if (cm1 > 0.0) {
          const double r = std::sqrt(cm1 * cp1);
          xi = cplx(0.0, std::log1p(cm1 + r));
          sinx = cplx(0.0, r);
        } else {
          const double r = std::sqrt(cm1 * cp1);
          xi = cplx(kPi, std::log1p(-cp1 + r));
          sinx = cplx(0.0, -r);
        }
        if (std::abs(sinx) == 0.0) return 0.0;
        return std::cos(m1 * x) * std::exp(kI * am2 * xi) / sinx;
      };
      QuadResult r = integrate_tanh_sinh(f, pa, pb, rel_tol, 1e-16, 12);
      if (!r.converged) {
        fail(ErrorCode::kQuadratureFailure, "residue panel did not converge");
      }
      total += r.value;
      err += r.error;
    }
  }
  const cplx pref = -kI / (2.0 * kPi);
  return {pref * total, err / (2.0 * kPi)};
}

GreenValue green_residue_series_complex(const LatticeIndex& m, cplx w,
                                        double rel_tol) {
  if (!(w.imag() > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "complex route needs Im w > 0");
  }
  const double m1 = std::abs(static_cast<double>(m.m1));
  const double am2 = std::abs(static_cast<double>(m.m2));
  const cplx c0 = (4.0 - w * w) / 2.0;
  auto f = [&](double x) -> cplx {
    const cplx c = c0 - std::cos(x);
    cplx xi = std::acos(c);
    if (xi.imag() < 0.0) xi = -xi;
    return std::cos(m1 * x) * std::exp(kI * am2 * xi) / std::sin(xi);
  };
  const double max_len = std::max(0.05, 4.0 / (m1 + am2 + 4.0));
  QuadResult r = integrate_adaptive(f, panel_breaks(0.0, kPi, max_len),
                                    1e-16, rel_tol, 20000);
  if (!r.converged) {
    fail(ErrorCode::kQuadratureFailure, "complex residue route");
  }
  const cplx pref = -kI / (2.0 * kPi);
  return {pref * r.value, r.error / (2.0 * kPi)};
}

}  // namespace blochfar
