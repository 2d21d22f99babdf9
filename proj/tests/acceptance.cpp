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

// Acceptance run: one PASS/FAIL line per criterion, details indented below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "blochfar/degeneracy.hpp"
#include "blochfar/farfield.hpp"
#include "blochfar/fem.hpp"
#include "blochfar/fem_dirac.hpp"
#include "blochfar/fem_td.hpp"
#include "blochfar/green.hpp"
#include "blochfar/lattice_td.hpp"
#include "blochfar/special.hpp"
#include "blochfar/traces.hpp"

using namespace blochfar;

namespace {

int g_failed = 0;

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Report {
  std::vector<std::string> lines;
  bool ok = true;
  void check(bool cond, const std::string& what) {
    lines.push_back(std::string(cond ? "ok   " : "FAIL ") + what);
    ok = ok && cond;
  }
  void note(const std::string& s) { lines.push_back("     " + s); }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}
std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

void run(int id, const std::string& title, const std::function<void(Report&)>& body) {
  Report r;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.check(false, std::string("exception: ") + e.what());
  }
  std::printf("%s criterion %d: %s (%.1fs)\n", r.ok ? "PASS" : "FAIL", id, title.c_str(),
              seconds_since(t0));
  for (const auto& l : r.lines) std::printf("    %s\n", l.c_str());
  std::fflush(stdout);
  if (!r.ok) ++g_failed;
}

// Slope of y against x by least squares.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double r_squared(const std::vector<double>& x, const std::vector<double>& y) {
  const double b = ls_slope(x, y);
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  const double a = my - b * mx;
  double ss_res = 0, ss_tot = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    ss_res += std::pow(y[i] - a - b * x[i], 2);
    ss_tot += std::pow(y[i] - my, 2);
  }
  return 1.0 - ss_res / ss_tot;
}

int lattice_bypass(double k) {
  const SpectralModel model = lattice_model();
  const auto tr = extract_real_traces(model, k);
  return tr.empty() ? 1 : choose_bypass_sign(tr.front(), model, k);
}

void criterion1(Report& r) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(20240611);
  std::uniform_int_distribution<int> U(-20, 20);
  std::vector<LatticeIndex> ms;
  while (ms.size() < 20) {
    const LatticeIndex m{U(rng), U(rng)};
    if (m.norm() >= 1.0 && m.norm() <= 20.0) ms.push_back(m);
  }
  const QuadratureGrid trap{256, 256, QuadratureRule::kTrapezoidPeriodic};
  for (double k : {0.5, 1.0, 1.5, 2.5}) {
    const auto surf = lattice_bypass_surface(k, lattice_bypass(k), 0.0);
    const auto deformed = green_deformed_surface_many(ms, k, surf, trap);
    double worst = 0.0;
    for (size_t i = 0; i < ms.size(); ++i) {
      const cplx a = kappa_extrapolate(ms[i], k).value;
      const cplx b = deformed[i].value;
      const cplx c = green_residue_series(ms[i], k).value;
      worst = std::max({worst, rel(a, c), rel(b, c), rel(a, b)});
    }
    r.check(worst <= 1e-5, fmt("k=%.1f: worst pairwise relative difference %.2e", k, worst));
  }
  const double t = seconds_since(t0);
  r.check(t <= 120.0, fmt("runtime %.1f s (limit 120 s)", t));
}

void criterion2(Report& r) {
  const double k = 0.5;
  std::vector<double> errs, lx, ly;
  for (int N : {30, 60, 120}) {
    const cplx u = green_residue_series({N, 0}, k).value;
    const double e = rel(lattice_farfield({N, 0}, k), u);
    errs.push_back(e);
    lx.push_back(std::log(double(N)));
    ly.push_back(std::log(std::abs(u)));
    r.note(fmt("N=%.0f: relative error %.4f", N, e));
  }
  r.check(errs[2] <= 0.03, fmt("error at N=120 is %.4f (limit 0.03)", errs[2]));
  r.check(errs[0] > errs[1] && errs[1] > errs[2], "error decreases monotonically");
  const double p = -ls_slope(lx, ly);
  r.check(std::abs(p - 0.5) <= 0.02, fmt("fitted decay exponent of |u(N,0)| is %.4f", p));
}

void criterion3(Report& r) {
  const double k = 0.2;
  double worst = 0.0;
  const std::vector<LatticeIndex> ms = {{50, 0}, {0, -60}, {45, 45}, {-30, 80}, {100, 0},
                                        {-71, -70}, {90, 20}, {12, -55}};
  for (const auto& m : ms) {
    const double u = std::abs(green_residue_series(m, k).value);
    const double h = std::abs(0.25 * hankel1_0(k * m.norm()));
    worst = std::max(worst, std::abs(u - h) / h);
  }
  r.check(worst <= 0.03,
          fmt("max relative modulus difference %.4f over %.0f points, |m| in [50,100]", worst,
              double(ms.size())));
}

void criterion4(Report& r) {
  const double k = 3.0;
  std::vector<double> x, y;
  for (int N = 4; N <= 30; N += 2) {
    x.push_back(N);
    y.push_back(std::log(std::abs(green_residue_series({N, 0}, k).value)));
  }
  const double s = ls_slope(x, y), r2 = r_squared(x, y);
  const double u30 = std::abs(green_residue_series({30, 0}, k).value);
  r.check(s < 0.0 && r2 > 0.999, fmt("log|u(N,0)| slope %.4f, R^2 %.6f", s, r2));
  r.check(u30 < 1e-8, fmt("|u(30,0)| = %.3e", u30));
}

void criterion5(Report& r) {
  const LatticeIndex m{10, 0};
  const double k = 1.0;
  const QuadratureGrid trap{256, 256, QuadratureRule::kTrapezoidPeriodic};
  const cplx oracle = kappa_extrapolate(m, k).value;
  const cplx plus = green_deformed_surface(m, k, lattice_explicit_surface(k, 1, 0.2), trap).value;
  const cplx minus =
      green_deformed_surface(m, k, lattice_explicit_surface(k, -1, 0.2), trap).value;
  r.check(rel(plus, minus) > 0.1,
          fmt("flipping the bypass changes u(10,0) by %.3f relative", rel(plus, minus)));
  r.note(fmt("explicit '+' field vs kappa->0 oracle: %.2e; '-' field: %.2e", rel(plus, oracle),
             rel(minus, oracle)));
  r.check(rel(plus, oracle) < 1e-6 && rel(minus, oracle) > 1e-3,
          "only the '+' explicit field matches the limiting-absorption oracle");
  const cplx gv =
      green_deformed_surface(m, k, lattice_bypass_surface(k, lattice_bypass(k), 0.2), trap).value;
  r.note(fmt("group-velocity bypass vs oracle: %.2e (same branch as the '-' field: %.2e)",
             rel(gv, oracle), rel(gv, minus)));
}

void criterion6(Report& r) {
  for (Vec2 a : {Vec2{30, 0}, Vec2{20, 15}})
    for (double kh : {0.01, -0.01})
      for (auto kind : {ExtremumKind::kMax, ExtremumKind::kMin}) {
        if (a[1] != 0.0 && kh < 0.0) continue;
        const CanonicalRegime g{kh, 2.0 * std::sqrt(2.0), 1.0, a, 1};
        const double e = rel(canonical_extremum_oracle(g, kind), canonical_extremum(g, kind));
        r.check(e <= 1e-4, std::string(kind == ExtremumKind::kMax ? "I_max" : "I_min") +
                               fmt(" alpha=(%.0f,%.0f)", a[0], a[1]) +
                               fmt(" khat=%+.2f: %.2e", kh, e));
      }
  for (Vec2 a : {Vec2{10, 10}, Vec2{10, -10}, Vec2{-8, 12}})
    for (double kh : {0.01, -0.01}) {
      const CanonicalRegime g{kh, 2.0, 1.0, a, 1};
      const bool propagating = a[0] * a[1] * kh > 0.0;
      const double e = rel(canonical_hyperbolic_oracle(g), canonical_hyperbolic(g));
      r.check(e <= 1e-4, fmt("I_hyp alpha=(%.0f,%.0f)", a[0], a[1]) +
                             fmt(" khat=%+.2f: %.2e", kh, e) +
                             (propagating ? " propagating" : " evanescent"));
    }
  struct DP {
    Vec2 a;
    double rho;
  };
  for (const DP& p : {DP{{20, 5}, 0.2}, DP{{20, 5}, -0.2}, DP{{10, -10}, 0.3}}) {
    const auto c = dirac_canonical_triple(p.a, p.rho, p.rho > 0 ? 1 : -1);
    const auto o = dirac_triple_oracle(p.a, p.rho);
    const double e = std::max({rel(o.J0, c.J0), rel(o.J1, c.J1), rel(o.J2, c.J2)});
    r.check(e <= 1e-4, fmt("J-triple alpha=(%.0f,%.0f)", p.a[0], p.a[1]) +
                           fmt(" rho=%+.1f: %.2e", p.rho, e));
  }
}

void criterion7(Report& r) {
  // Small |alpha1 alpha2| keeps all three points in the small-argument regime.
  const double ks = 2.0;
  const double predicted = kPi / ks;
  for (Vec2 a : {Vec2{0.1, 0.1}, Vec2{0.1, -0.1}}) {
    std::vector<double> x, y;
    for (double kh : {1e-2, 1e-3, 1e-4}) {
      x.push_back(std::log(1.0 / kh));
      y.push_back(std::abs(canonical_hyperbolic(CanonicalRegime{kh, ks, 1.0, a, 1})));
    }
    const double s = ls_slope(x, y);
    const double e = std::abs(s - predicted) / predicted;
    r.check(e <= 0.1, fmt("alpha=(%.1f,%.1f)", a[0], a[1]) +
                          fmt(": slope %.4f vs pi/k* = %.4f", s, predicted) +
                          fmt(", error %.3f", e));
  }
}

void criterion8(Report& r) {
  LatticeTDOptions o;  // k* = 2, observer (2,0)
  const auto res = lattice_time_domain(o);
  std::vector<double> amp;
  for (cplx z : res.samples[0]) amp.push_back(std::abs(z));
  const auto f = fit_log_growth(res.times, amp, o.T / 100.0, o.T);
  const double predicted = 2.0 / (4.0 * kPi);
  r.check(f.b > 0.0 && f.r2 > 0.98,
          fmt("|u| = a + b log t on [T/100, T]: b = %.4f, R^2 = %.4f", f.b, f.r2));
  r.note(fmt("slope vs two-crossing prediction 2/(4 pi) = %.4f", predicted));
  double worst = 0.0;
  for (Vec2 a : {Vec2{8, 8}, Vec2{5, 12}, Vec2{20, 3}})
    worst = std::max(worst, rel(resonance_time_oracle(a, 1.0, 50.0),
                                resonance_time_integral(a, 1.0, 50.0)));
  r.check(worst <= 1e-3, fmt("I_time closed form vs quadrature oracle: %.2e", worst));
}

void criterion9(Report& r) {
  const CellMesh mesh = generate_hex_cell();
  const BlochOperator op(mesh);
  const Vec2 lo{1.6, -2.6}, hi{2.6, -1.6};
  const DiracCone K = analyze_cone(op, 0, lo, hi);
  const DiracCone Kp = analyze_cone(op, 0, {-hi[0], -hi[1]}, {-lo[0], -lo[1]});
  const auto& n = K.norm;
  r.check(K.point.rel_gap < 1e-8 && Kp.point.rel_gap < 1e-8,
          fmt("double eigenvalue relative gap %.2e / %.2e", K.point.rel_gap, Kp.point.rel_gap));
  r.note(fmt("k* = %.6f at xi1 = %.9f", K.point.k, K.point.xi[0]));
  r.check(n.trace_residual < 1e-8, fmt("relative trace of Y %.2e", n.trace_residual));
  const double dl = 1e-3;
  const double res = cone_residual(op, K.point, n, dl);
  r.check(res < 1e-6, fmt("cone residual at delta-lambda = 1e-3: %.2e", res));
  r.note(fmt("same residual relative to delta-lambda^2: %.2e", res / (dl * dl)));
  const double c1 = std::abs(n.q1 * n.q1 + std::norm(n.q2) - 1.0);
  const double c2 = std::abs(n.q3 * n.q3 + std::norm(n.q4) - 1.0);
  const double c3 = std::abs(2.0 * (n.q4 * std::conj(n.q2)).real() + 2.0 * n.q1 * n.q3);
  r.check(std::max({c1, c2, c3}) < 1e-8, fmt("q constraints %.2e", std::max({c1, c2, c3})));

  TimeDomainOptions o;
  // 100 cells leave the 20-35 comparison ring clear of the 12-cell sponge.
  o.cells = 100;
  o.steps = 3400;
  o.dt = 0.1;
  const double k = std::sqrt(K.point.lambda - dl);
  o.omega = k;
  o.src_node = op.reduced_index(mesh.node_at(6, 4));
  const auto t0 = std::chrono::steady_clock::now();
  const auto td = run_time_domain(op, o);
  const double t = seconds_since(t0);
  r.check(t <= 900.0, fmt("time-domain run %.0fx%.0f cells", o.cells, o.cells) +
                          fmt(", dt=0.1: %.1f s (limit 900 s)", t));
  r.check(td.energy_balance < 5e-3, fmt("energy balance %.2e", td.energy_balance));
  double num = 0.0, den = 0.0;
  const long half = o.cells / 2;
  for (long a = -half; a <= half; ++a)
    for (long b = -half; b <= half; ++b) {
      const LatticeIndex m{a, b};
      if (!td.contains(m)) continue;
      const double d = std::hypot(a + 0.5 * b, 0.5 * std::sqrt(3.0) * b);
      if (d < 20.0 || d > 35.0) continue;
      const auto u = dirac_local_field(K, o.src_node, k, m) + dirac_local_field(Kp, o.src_node, k, m);
      for (int q = 0; q < op.reduced_size(); ++q) {
        num += std::norm(u[q] - td.at(m, q));
        den += std::norm(u[q]);
      }
    }
  const double err = den > 0.0 ? std::sqrt(num / den) : INFINITY;
  r.check(err <= 0.05,
          fmt("local Dirac field vs RK4 on cells 20-35 from the source: relative L2 error %.3f",
              err));
}

void criterion10(Report& r) {
  // Lattice symmetries of u.
  double sym = 0.0;
  for (LatticeIndex m : {LatticeIndex{7, 3}, LatticeIndex{12, -5}}) {
    const cplx u = green_residue_series(m, 1.0).value;
    for (LatticeIndex s : {LatticeIndex{-m.m1, m.m2}, LatticeIndex{m.m1, -m.m2},
                           LatticeIndex{m.m2, m.m1}, LatticeIndex{-m.m2, -m.m1}})
      sym = std::max(sym, rel(green_residue_series(s, 1.0).value, u));
  }
  r.check(sym < 1e-10, fmt("u(m) square-lattice symmetry %.2e", sym));
  // Spectral function: periodicity and evenness.
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> U(-kPi, kPi);
  double per = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double a = U(rng), b = U(rng);
    const Wavenumber w{1.3, 0.1};
    const cplx f = lattice_spectral_value({a, b}, w);
    per = std::max({per, rel(lattice_spectral_value({a + 2 * kPi, b}, w), f),
                    rel(lattice_spectral_value({-a, -b}, w), f)});
  }
  r.check(per < 1e-12, fmt("F periodicity and evenness %.2e", per));
  // FEM Hermiticity, conjugation and the quadratic-form identity.
  const BlochOperator op(generate_hex_cell());
  double herm = 0.0, conj = 0.0, quad = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Vec2 xi{U(rng), U(rng)};
    const auto K = op.K(xi);
    herm = std::max(herm, (K - K.adjoint()).norm() / K.norm());
    conj = std::max(conj, (op.K({-xi[0], -xi[1]}) - K.conjugate()).norm() / K.norm());
    Eigen::VectorXcd f = Eigen::VectorXcd::Random(op.reduced_size());
    Eigen::VectorXcd F(op.full_size());
    for (int a = 0; a < op.full_size(); ++a) {
      const auto& p = op.shift(a);
      F[a] = std::exp(-kI * (p[0] * xi[0] + p[1] * xi[1])) * f[op.reduced_index(a)];
    }
    quad = std::max(quad, rel(f.dot(K * f), F.dot(op.cell().K0 * F)));
  }
  r.check(herm < 1e-13, fmt("K(xi) Hermitian %.2e", herm));
  r.check(conj < 1e-13, fmt("K(-xi) = conj K(xi) %.2e", conj));
  r.check(quad < 1e-12, fmt("quadratic-form identity %.2e", quad));
  // Special functions.
  double wr = 0.0, hc = 0.0;
  for (double x : {0.3, 2.0, 9.0, 40.0, 250.0}) {
    const auto b = bessel_jy(x);
    const double w = 2.0 / (kPi * x);
    wr = std::max(wr, std::abs(b.j0 * b.y1 - b.j1 * b.y0 + w) / w);
    hc = std::max(hc, std::abs(hankel2_0(x) - std::conj(hankel1_0(x))));
  }
  r.check(wr < 1e-12, fmt("Bessel Wronskian %.2e", wr));
  r.check(hc == 0.0, "H2 = conj H1");
  // Reciprocity of the far field.
  const double rc = rel(lattice_farfield({-40, -17}, 0.9), lattice_farfield({40, 17}, 0.9));
  r.check(rc < 1e-12, fmt("far-field reciprocity %.2e", rc));
}

}  // namespace

int main() {
  run(1, "lattice oracle triangle", criterion1);
  run(2, "SoS asymptotics at k=0.5", criterion2);
  run(3, "continuum limit at k=0.2", criterion3);
  run(4, "band-gap decay at k=3", criterion4);
  run(5, "bypass discrimination", criterion5);
  run(6, "degeneracy closed forms vs plane oracles", criterion6);
  run(7, "hyperbolic pinch slope", criterion7);
  run(8, "resonance growth at k*=2", criterion8);
  run(9, "FEM Dirac pipeline", criterion9);
  run(10, "symmetry and invariant suite", criterion10);
  std::printf("%d of 10 criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
