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

#include <cmath>
#include <random>

#include "blochfar/fem.hpp"
#include "blochfar/fem_dirac.hpp"
#include "blochfar/fem_td.hpp"
#include "blochfar/lattice_td.hpp"
#include "doctest.h"

using namespace blochfar;

namespace {
template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

const CellMesh& hex() {
  static const CellMesh m = generate_hex_cell();
  return m;
}
const BlochOperator& hex_op() {
  static const BlochOperator op(hex());
  return op;
}
const Vec2 kKlo{1.6, -2.6}, kKhi{2.6, -1.6};
const Vec2 kKplo{-2.6, 1.6}, kKphi{-1.6, 2.6};
}  // namespace

TEST_CASE("hex cell mesh") {
  const auto& m = hex();
  CHECK(m.nodes.size() == 74);
  CHECK(m.area() == doctest::Approx(13.62258).epsilon(1e-6));
  CHECK_NOTHROW(m.validate());
  const auto back = mesh_from_json(mesh_to_json(m));
  CHECK(back.nodes.size() == m.nodes.size());
  CHECK(back.triangles == m.triangles);
  CHECK(back.tags == m.tags);
  CHECK(back.left_right == m.left_right);
  for (size_t i = 0; i < m.nodes.size(); ++i) {
    CHECK(back.nodes[i][0] == m.nodes[i][0]);
    CHECK(back.nodes[i][1] == m.nodes[i][1]);
  }
  CHECK(code_of([] { mesh_from_json("{\"format\":\"nope\"}"); }) == ErrorCode::kMeshError);
  auto bad = m;
  bad.nodes[bad.triangles[0][1]] = bad.nodes[bad.triangles[0][0]];
  CHECK(code_of([&] { bad.validate(); }) != ErrorCode::kOk);
}

TEST_CASE("cell matrices") {
  const auto& c = hex_op().cell();
  CHECK(c.M0.sum() == doctest::Approx(hex().area()).epsilon(1e-12));
  CHECK(c.M_lumped.sum() == doctest::Approx(hex().area()).epsilon(1e-12));
  CHECK(c.K0.rowwise().sum().cwiseAbs().maxCoeff() < 1e-12);
  CHECK((c.K0 - c.K0.transpose()).norm() < 1e-14);
  CHECK(hex_op().reduced_size() == 57);
}

TEST_CASE("Bloch operator structure") {
  const auto& op = hex_op();
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-kPi, kPi);
  for (int t = 0; t < 50; ++t) {
    const Vec2 xi{U(rng), U(rng)};
    const auto K = op.K(xi);
    CHECK((K - K.adjoint()).norm() < 1e-13 * K.norm());
    CHECK((op.K({-xi[0], -xi[1]}) - K.conjugate()).norm() < 1e-13 * K.norm());
    CHECK((K - op.reduce_dense(op.cell().K0, xi)).norm() < 1e-12 * K.norm());
    // Quadratic form: the reduced form equals the full form of the Bloch vector.
    Eigen::VectorXcd f = Eigen::VectorXcd::Random(op.reduced_size());
    Eigen::VectorXcd F(op.full_size());
    for (int a = 0; a < op.full_size(); ++a) {
      const auto& p = op.shift(a);
      F[a] = std::exp(-kI * (p[0] * xi[0] + p[1] * xi[1])) * f[op.reduced_index(a)];
    }
    const cplx q1 = f.dot(K * f);
    const cplx q2 = F.dot(op.cell().K0 * F);
    CHECK(std::abs(q1 - q2) < 1e-11 * std::abs(q2));
  }
  // Analytic derivative against central differences.
  const Vec2 xi{0.4, -1.3};
  const double h = 1e-6;
  for (int i = 0; i < 2; ++i) {
    Vec2 a = xi, b = xi;
    a[i] += h;
    b[i] -= h;
    const Eigen::MatrixXcd fd = (op.K(a) - op.K(b)) / (2 * h);
    CHECK((fd - op.dK(i, xi)).norm() < 1e-7 * op.dK(i, xi).norm());
  }
}

TEST_CASE("Bloch eigenvalues") {
  const auto& op = hex_op();
  const auto e0 = solve_bloch_eigen(op, {0, 0}, 3);
  CHECK(std::abs(e0.lambda[0]) < 1e-12);
  const Eigen::VectorXcd v = e0.V.col(0) / e0.V(0, 0);
  CHECK((v - Eigen::VectorXcd::Ones(v.size())).norm() < 1e-9);
  const auto a = solve_bloch_eigen(op, {0.7, 1.9}, 4);
  const auto b = solve_bloch_eigen(op, {-0.7, -1.9}, 4);
  CHECK((a.lambda - b.lambda).norm() < 1e-12);
  // M-orthonormality.
  const auto M = op.M({0.7, 1.9});
  CHECK((a.V.adjoint() * M * a.V - Eigen::MatrixXcd::Identity(4, 4)).norm() < 1e-10);
  // Consistent mass runs through the generalized solver.
  const BlochOperator opc(hex(), false);
  const auto c = solve_bloch_eigen(opc, {0.7, 1.9}, 2);
  CHECK(c.lambda[0] > 0.0);
  CHECK(std::abs(c.lambda[0] - a.lambda[0]) < 0.1 * a.lambda[0]);
}

TEST_CASE("double eigenvalue at the K valleys") {
  const auto& op = hex_op();
  const auto K = find_double_eigenvalue(op, 0, kKlo, kKhi);
  const auto Kp = find_double_eigenvalue(op, 0, kKplo, kKphi);
  CHECK(K.xi[0] == doctest::Approx(2 * kPi / 3).epsilon(1e-7));
  CHECK(K.xi[1] == doctest::Approx(-2 * kPi / 3).epsilon(1e-7));
  CHECK(K.rel_gap < 1e-8);
  CHECK(Kp.xi[0] == doctest::Approx(-K.xi[0]).epsilon(1e-7));
  CHECK(Kp.xi[1] == doctest::Approx(-K.xi[1]).epsilon(1e-7));
  CHECK(Kp.lambda == doctest::Approx(K.lambda).epsilon(1e-10));
  CHECK(K.k == doctest::Approx(0.804935).epsilon(1e-5));

  // Breaking the hexagonal symmetry opens the gap.
  auto m = hex();
  const int n = m.node_at(2, 5);
  REQUIRE(n >= 0);
  m.nodes[n][0] += 0.15;
  m.nodes[n][1] -= 0.1;
  const BlochOperator pert(m);
  CHECK(code_of([&] { find_double_eigenvalue(pert, 0, kKlo, kKhi); }) ==
        ErrorCode::kNoDoublePoint);
}

TEST_CASE("cone normalization") {
  // Isotropic cone: Y1 = sigma_x, Y2 = sigma_y.
  ConeMatrices Y;
  Y.Y1 << 0, 1, 1, 0;
  Y.Y2 << 0, cplx(0, -1), cplx(0, 1), 0;
  const auto cn = normalize_cone(Y);
  CHECK(cn.C1 == doctest::Approx(1.0));
  CHECK(cn.C2 == doctest::Approx(1.0));
  CHECK(std::abs(cn.C3) < 1e-14);
  CHECK(std::abs(std::norm(cn.q1) + std::norm(cn.q2) - 1.0) < 1e-12);
  CHECK(std::abs(std::norm(cn.q3) + std::norm(cn.q4) - 1.0) < 1e-12);
  CHECK(std::abs(2.0 * (cn.q4 * std::conj(cn.q2)).real() + 2.0 * cn.q1 * cn.q3) < 1e-12);
  ConeMatrices flat;
  flat.Y1 << 0, 1, 1, 0;
  flat.Y2 << 0, 2, 2, 0;  // parallel to Y1: the quadratic form is degenerate
  CHECK(code_of([&] { normalize_cone(flat); }) == ErrorCode::kNotElliptic);
}

TEST_CASE("hex cell cone") {
  const auto& op = hex_op();
  const auto cone = analyze_cone(op, 0, kKlo, kKhi);
  const auto& cn = cone.norm;
  CHECK((cone.Y.Y1 - cone.Y.Y1.adjoint()).norm() < 1e-12);
  CHECK((cone.Y.Y2 - cone.Y.Y2.adjoint()).norm() < 1e-12);
  CHECK(cn.trace_residual < 1e-9);
  CHECK(std::abs(std::norm(cn.q1) + std::norm(cn.q2) - 1.0) < 1e-9);
  CHECK(std::abs(std::norm(cn.q3) + std::norm(cn.q4) - 1.0) < 1e-9);
  CHECK(std::abs(2.0 * (cn.q4 * std::conj(cn.q2)).real() + 2.0 * cn.q1 * cn.q3) < 1e-9);
  // The normalized cone is round: residual is quadratic in r beyond the cone itself.
  const double r3 = cone_residual(op, cone.point, cn, 1e-3);
  const double r4 = cone_residual(op, cone.point, cn, 1e-4);
  CHECK(r3 < 1e-6);
  CHECK(r3 / r4 == doctest::Approx(1000.0).epsilon(0.05));
  // Slopes predicted by Y against eigenvalue differences along xi_1.
  const double h = 1e-5;
  const auto e = solve_bloch_eigen(op, {cone.point.xi[0] + h, cone.point.xi[1]}, 2);
  const Eigen::Vector2d mu = cone.Y.Y1.selfadjointView<Eigen::Lower>().eigenvalues();
  const double pred = (mu[1] - mu[0]) * h;  // split of g = k^2 - lambda
  CHECK(std::abs((e.lambda[1] - e.lambda[0]) - pred) < 0.01 * pred);
}

TEST_CASE("Dirac local field") {
  const auto& op = hex_op();
  const auto cone = analyze_cone(op, 0, kKlo, kKhi);
  const int src = op.reduced_index(hex().node_at(6, 4));
  const double k = std::sqrt(cone.point.lambda - 1e-3);
  const auto conep = analyze_cone(op, 0, kKplo, kKphi);
  const auto u = dirac_local_field(cone, src, k, {10, 0});
  const auto up = dirac_local_field(conep, src, k, {10, 0});
  CHECK(u.size() == op.reduced_size());
  CHECK(std::abs(u[src] + up[src] - cplx(1.641013e-02, -6.818747e-04)) < 1e-7);
}

TEST_CASE("time stepping energy balance and stability") {
  const auto& op = hex_op();
  TimeDomainOptions o;
  o.cells = 9;
  o.steps = 400;
  o.dt = 0.1;
  o.sponge_cells = 0;
  const auto r = run_time_domain(op, o);
  CHECK(r.energy > 0.0);
  CHECK(r.energy_balance < 5e-3);
  CHECK(r.contains({4, 4}));
  CHECK(!r.contains({5, 0}));
  CHECK(r.dt_limit == doctest::Approx(rk4_step_limit(op, 1.0)));
  o.dt = r.dt_limit;
  CHECK(code_of([&] { run_time_domain(op, o); }) == ErrorCode::kInstability);
  o.dt = 0.1;
  o.omega = 0.0;
  CHECK(code_of([&] { run_time_domain(op, o); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("free-space dispersion on a cell without a hole") {
  HexCellParams p;
  p.n = 16;
  p.h = 0.55 / 2;
  p.hole_radius = 0.0;
  p.hole_i = p.hole_j = 8;
  const auto m = generate_hex_cell(p);
  const BlochOperator op(m);
  // lambda = |G^{-T} xi|^2 with G = [d l].
  const double a = m.d[0], b = m.l[0], c = m.d[1], d = m.l[1];
  const double det = a * d - b * c;
  for (Vec2 xi : {Vec2{0.2, 0.0}, Vec2{0.0, 0.2}, Vec2{0.14, -0.14}}) {
    const double y1 = (d * xi[0] - c * xi[1]) / det;
    const double y2 = (-b * xi[0] + a * xi[1]) / det;
    const double expect = y1 * y1 + y2 * y2;
    const auto e = solve_bloch_eigen(op, xi, 1);
    CHECK(std::abs(e.lambda[0] - expect) < 0.02 * expect);
  }
}

TEST_CASE("log growth fit") {
  std::vector<double> t, y;
  for (int i = 1; i <= 200; ++i) {
    t.push_back(i);
    y.push_back(0.3 + 0.7 * std::log(double(i)));
  }
  const auto f = fit_log_growth(t, y, 10.0, 200.0);
  CHECK(f.a == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(f.b == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
}
