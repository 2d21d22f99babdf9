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

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "blochfar/core.hpp"

namespace blochfar {

// Deterministic pairwise summation.
template <class T>
T pairwise_sum(const T* v, size_t n) {
  if (n == 0) return T{};
  if (n <= 16) {
    T s = v[0];
    for (size_t i = 1; i < n; ++i) s += v[i];
    return s;
  }
  const size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}
template <class T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(v.data(), v.size());
}

struct QuadResult {
  cplx value{};
  double error = 0.0;
  long evals = 0;
  bool converged = true;
};

namespace detail {
// 7-point Gauss / 15-point Kronrod on [-1, 1].
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
void gk15(F& f, double a, double b, cplx& res, double& err) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const cplx fc = f(c);
  cplx rk = fc * kWgk[7];
  cplx rg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const cplx f1 = f(c - dx), f2 = f(c + dx);
    rk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) rg += kWg[j / 2] * (f1 + f2);
  }
  res = rk * h;
  err = std::abs((rk - rg) * h);
}
}  // namespace detail

// Globally adaptive Gauss-Kronrod 15 on a list of breakpoints.
template <class F>
QuadResult integrate_adaptive(F&& f, const std::vector<double>& breaks,
                              double abs_tol, double rel_tol,
                              long max_intervals = 4000) {
  struct Iv {
    double a, b;
    cplx v;
    double e;
    bool operator<(const Iv& o) const { return e < o.e; }
  };
  std::priority_queue<Iv> pq;
  QuadResult out;
  for (size_t i = 0; i + 1 < breaks.size(); ++i) {
    Iv iv{breaks[i], breaks[i + 1], {}, 0.0};
    if (iv.b <= iv.a) continue;
    detail::gk15(f, iv.a, iv.b, iv.v, iv.e);
    out.evals += 15;
    pq.push(iv);
  }
  long count = static_cast<long>(pq.size());
  auto totals = [&](cplx& v, double& e) {
    std::vector<Iv> all;
    auto copy = pq;
    while (!copy.empty()) {
      all.push_back(copy.top());
      copy.pop();
    }
    std::sort(all.begin(), all.end(),
              [](const Iv& x, const Iv& y) { return x.a < y.a; });
    std::vector<cplx> vs;
    std::vector<double> es;
    for (auto& x : all) {
      vs.push_back(x.v);
      es.push_back(x.e);
    }
    v = pairwise_sum(vs);
    e = pairwise_sum(es);
  };
  cplx total;
  double err;
  totals(total, err);
  // Running sums are only used to decide when to stop.
  double run_err = err;
  cplx run_val = total;
  while (run_err > std::max(abs_tol, rel_tol * std::abs(run_val))) {
    if (count >= max_intervals) {
      out.converged = false;
      break;
    }
    Iv top = pq.top();
    pq.pop();
    const double m = 0.5 * (top.a + top.b);
    if (m <= top.a || m >= top.b) {
      out.converged = false;
      pq.push(top);
      break;
    }
    Iv l{top.a, m, {}, 0.0}, r{m, top.b, {}, 0.0};
    detail::gk15(f, l.a, l.b, l.v, l.e);
    detail::gk15(f, r.a, r.b, r.v, r.e);
    out.evals += 30;
    run_val += l.v + r.v - top.v;
    run_err += l.e + r.e - top.e;
    pq.push(l);
    pq.push(r);
    ++count;
    if (count % 256 == 0) totals(run_val, run_err);
  }
  totals(out.value, out.error);
  return out;
}

// Tanh-sinh on [a, b]; f(x, x - a, b - x) receives endpoint distances
// computed without cancellation.
template <class F>
QuadResult integrate_tanh_sinh(F&& f, double a, double b, double rel_tol,
                               double abs_tol = 0.0, int max_level = 10) {
  QuadResult out;
  const double half = 0.5 * (b - a);
  const double tmax = 4.5;
  double h = 0.5;
  auto point_pair = [&](double t, cplx& acc) {
    const double s = 0.5 * kPi * std::sinh(t);
    const double ch = std::cosh(s);
    const double w = 0.5 * kPi * std::cosh(t) / (ch * ch);
    if (w < 1e-300) return;
    const double u = std::exp(-s) / ch;  // 1 - tanh(s)
    const double d = half * u;           // distance to the nearer endpoint
    if (d <= 0.0) return;
    const double far = 2.0 * half - d;
    acc += w * f(a + d, d, far);
    acc += w * f(b - d, far, d);
    out.evals += 2;
  };
  cplx sum = 0.5 * kPi * f(0.5 * (a + b), half, half);
  out.evals = 1;
  for (double t = h; t <= tmax; t += h) point_pair(t, sum);
  cplx prev = sum * h * half;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    cplx add = 0.0;
    for (double t = h; t <= tmax; t += 2 * h) point_pair(t, add);
    sum += add;
    const cplx cur = sum * h * half;
    const double diff = std::abs(cur - prev);
    prev = cur;
    if (level >= 3 && diff <= std::max(abs_tol, rel_tol * std::abs(cur))) {
      out.value = cur;
      out.error = diff;
      return out;
    }
  }
  out.value = prev;
  out.converged = false;
  out.error = std::abs(prev);
  return out;
}

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

}  // namespace blochfar
