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

#include "blochfar/fem_td.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <cmath>

namespace blochfar {

bool TimeDomainResult::contains(const LatticeIndex& m) const {
  const long a = centre + m.m1, b = centre + m.m2;
  return a >= 0 && b >= 0 && a < cells && b < cells;
}

cplx TimeDomainResult::at(const LatticeIndex& m, int r) const {
  if (!contains(m) || r < 0 || r >= n_red) {
    fail(ErrorCode::kInvalidArgument, "observation point outside the patch");
  }
  const long a = centre + m.m1, b = centre + m.m2;
  return field[(a * cells + b) * n_red + r];
}

double rk4_step_limit(const BlochOperator& op, double c) {
  const auto& cell = op.cell();
  const Eigen::VectorXd s = cell.M_lumped.cwiseSqrt().cwiseInverse();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.asDiagonal() * cell.K0 *
                                                    s.asDiagonal());
  const double lmax = es.eigenvalues().maxCoeff();
  // RK4 covers the imaginary axis up to 2 sqrt(2).
  return 2.0 * std::sqrt(2.0) / (c * std::sqrt(lmax));
}

TimeDomainResult run_time_domain(const BlochOperator& op, const TimeDomainOptions& o) {
  if (o.cells < 3 || o.steps < 1 || !(o.dt > 0.0) || !(o.c > 0.0) ||
      !(o.omega > 0.0) || o.sponge_cells < 0 ||
      2 * o.sponge_cells >= o.cells) {
    fail(ErrorCode::kInvalidArgument, "bad time-domain options");
  }
  const int nr = op.reduced_size();
  if (o.src_node < 0 || o.src_node >= nr) {
    fail(ErrorCode::kInvalidArgument, "source node index");
  }
  TimeDomainResult res;
  res.cells = o.cells;
  res.n_red = nr;
  res.centre = o.cells / 2;
  res.dt_limit = rk4_step_limit(op, o.c);
  if (o.dt > o.cfl_safety * res.dt_limit) {
    fail(ErrorCode::kInstability, "dt " + std::to_string(o.dt) +
                                      " exceeds the RK4 limit " +
                                      std::to_string(o.cfl_safety * res.dt_limit));
  }
  const int L = o.cells;
  const long N = static_cast<long>(L) * L * nr;
  auto gid = [&](long a, long b, int r) -> long {
    if (a < 0 || b < 0 || a >= L || b >= L) return -1;
    return (a * L + b) * nr + r;
  };
  const auto& cell = op.cell();
  const int nf = op.full_size();
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(N);
  for (long a = 0; a < L; ++a) {
    for (long b = 0; b < L; ++b) {
      for (int p = 0; p < nf; ++p) {
        const auto& sp = op.shift(p);
        const long gp = gid(a + sp[0], b + sp[1], op.reduced_index(p));
        if (gp < 0) continue;
        mass[gp] += cell.M_lumped[p];
        for (int q = 0; q < nf; ++q) {
          const double v = cell.K0(p, q);
          if (v == 0.0) continue;
          const auto& sq = op.shift(q);
          const long gq = gid(a + sq[0], b + sq[1], op.reduced_index(q));
          if (gq >= 0) trip.emplace_back(gp, gq, v);
        }
      }
    }
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> K(N, N);
  K.setFromTriplets(trip.begin(), trip.end());
  trip.clear();
  trip.shrink_to_fit();
  const Eigen::VectorXd minv = mass.cwiseInverse();
  // Damping ramps quadratically across the outer sponge_cells layers.
  Eigen::VectorXd gamma = Eigen::VectorXd::Zero(N);
  if (o.sponge_cells > 0) {
    for (long a = 0; a < L; ++a) {
      for (long b = 0; b < L; ++b) {
        const long edge = std::min(std::min(a, b), std::min(L - 1 - a, L - 1 - b));
        if (edge >= o.sponge_cells) continue;
        const double x = static_cast<double>(o.sponge_cells - edge) / o.sponge_cells;
        for (int r = 0; r < nr; ++r) gamma[gid(a, b, r)] = o.sponge_strength * x * x;
      }
    }
  }
  const long src = gid(res.centre, res.centre, o.src_node);
  const double c2 = o.c * o.c;
  const double tr = o.ramp_time < 0.0 ? 0.1 * o.steps * o.dt : o.ramp_time;
  auto ramp = [&](double t) {
    if (tr <= 0.0 || t >= tr) return 1.0;
    return 0.5 - 0.5 * std::cos(kPi * t / tr);
  };
  auto force = [&](double t) { return std::exp(-kI * o.omega * t) * ramp(t); };

  Eigen::VectorXcd u = Eigen::VectorXcd::Zero(N), v = Eigen::VectorXcd::Zero(N);
  Eigen::VectorXcd ku(N), a1(N), a2(N), a3(N), a4(N), v1(N), v2(N), v3(N), v4(N);
  Eigen::VectorXcd us(N), vs(N);
  const Eigen::VectorXd gm = gamma.cwiseProduct(mass) / c2;
  // Acceleration and net power (input minus sponge loss) at a stage.
  auto accel = [&](const Eigen::VectorXcd& uu, const Eigen::VectorXcd& vv, double t,
                   Eigen::VectorXcd& out) {
    ku.noalias() = K * uu;
    const cplx f = force(t);
    out = -c2 * minv.cwiseProduct(ku) - gamma.cwiseProduct(vv);
    out[src] += c2 * minv[src] * f;
    double loss = 0.0;
    if (o.sponge_cells > 0) loss = (vv.cwiseAbs2().cwiseProduct(gm)).sum();
    return (std::conj(vv[src]) * f).real() - loss;
  };
  const double dt = o.dt;
  double t = 0.0, work = 0.0;
  for (int s = 0; s < o.steps; ++s) {
    const double p1 = accel(u, v, t, a1);
    v1 = v;
    us = u + 0.5 * dt * v1;
    vs = v + 0.5 * dt * a1;
    v2 = vs;
    const double p2 = accel(us, vs, t + 0.5 * dt, a2);
    us = u + 0.5 * dt * v2;
    vs = v + 0.5 * dt * a2;
    v3 = vs;
    const double p3 = accel(us, vs, t + 0.5 * dt, a3);
    us = u + dt * v3;
    vs = v + dt * a3;
    v4 = vs;
    const double p4 = accel(us, vs, t + dt, a4);
    u += (dt / 6.0) * (v1 + 2.0 * v2 + 2.0 * v3 + v4);
    v += (dt / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    work += (dt / 6.0) * (p1 + 2.0 * p2 + 2.0 * p3 + p4);
    t += dt;
    if (s % 64 == 0 && !std::isfinite(u.squaredNorm())) {
      fail(ErrorCode::kInstability, "field blew up at t = " + std::to_string(t));
    }
  }
  ku.noalias() = K * u;
  res.energy = 0.5 * (v.cwiseAbs2().cwiseProduct(mass).sum() / c2 +
                      std::real(u.dot(ku)));
  res.work = work;
  const double scale = std::max(std::abs(work), res.energy);
  res.energy_balance = scale > 0.0 ? std::abs(res.energy - work) / scale : 0.0;
  if (!std::isfinite(res.energy) || res.energy > 1e6 * std::max(std::abs(work), 1e-300)) {
    fail(ErrorCode::kInstability, "energy growth without matching input work");
  }
  res.t_end = t;
  res.field = u * std::exp(kI * o.omega * t);
  return res;
}

}  // namespace blochfar
