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

#include "blochfar.h"

#include <memory>
#include <new>
#include <string>

#include "blochfar/degeneracy.hpp"
#include "blochfar/farfield.hpp"
#include "blochfar/fem_dirac.hpp"
#include "blochfar/fem_td.hpp"
#include "blochfar/green.hpp"
#include "blochfar/lattice_td.hpp"
#include "blochfar/traces.hpp"

using namespace blochfar;

struct bf_traces {
  std::vector<RealTrace> traces;
  std::vector<std::vector<double>> xy;
};

struct bf_fem {
  std::unique_ptr<BlochOperator> op;
};

struct bf_cone {
  const BlochOperator* op = nullptr;  // borrowed from the owning bf_fem
  DiracCone cone;
};

struct bf_td {
  TimeDomainResult res;
};

namespace {

thread_local std::string g_last_error;

template <class F>
bf_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return BF_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return static_cast<bf_status>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return BF_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BF_E_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) fail(ErrorCode::kInvalidArgument, what);
}

CanonicalRegime to_regime(const bf_regime* r) {
  require(r != nullptr, "null regime");
  CanonicalRegime c;
  c.khat = r->khat;
  c.kstar = r->kstar;
  c.Lambda = r->Lambda;
  c.alpha_tilde = {r->alpha1, r->alpha2};
  c.N = r->N;
  return c;
}

std::unique_ptr<bf_traces> make_traces(const SpectralModel& model, double k,
                                       const TraceOptions& opt) {
  auto t = std::make_unique<bf_traces>();
  t->traces = extract_real_traces(model, k, opt);
  for (auto& tr : t->traces) {
    tr.bypass_sign = choose_bypass_sign(tr, model, k);
    std::vector<double> xy;
    xy.reserve(2 * tr.points.size());
    for (const auto& p : tr.points) {
      xy.push_back(p[0]);
      xy.push_back(p[1]);
    }
    t->xy.push_back(std::move(xy));
  }
  return t;
}

void put(cplx v, double* re, double* im) {
  require(re != nullptr && im != nullptr, "null output");
  *re = v.real();
  *im = v.imag();
}

void put_triple(const DiracTriple& t, double out[6]) {
  require(out != nullptr, "null output");
  const cplx v[3] = {t.J0, t.J1, t.J2};
  for (int i = 0; i < 3; ++i) {
    out[2 * i] = v[i].real();
    out[2 * i + 1] = v[i].imag();
  }
}

}  // namespace

extern "C" {

int bf_error_class(bf_status s) {
  if (s == BF_OK) return 0;
  if (s == BF_E_INTERNAL) return 3;
  switch (error_class(static_cast<ErrorCode>(s))) {
    case ErrorClass::kConfig: return 1;
    case ErrorClass::kDegeneracy: return 2;
    case ErrorClass::kNumerical: return 3;
  }
  return 3;
}

const char* bf_error_name(bf_status s) {
  if (s == BF_E_INTERNAL) return "Internal";
  return error_name(static_cast<ErrorCode>(s));
}

const char* bf_last_error(void) { return g_last_error.c_str(); }

const char* bf_version(void) { return "1.0.0"; }

bf_status bf_lattice_green(int method, double k, long m1, long m2, int bypass_sign,
                           double* re, double* im, double* est_error) {
  return guarded([&] {
    const LatticeIndex m{m1, m2};
    GreenValue g;
    switch (method) {
      case BF_METHOD_KAPPA: {
        const auto r = kappa_extrapolate(m, k);
        g.value = r.value;
        g.error = r.error;
        break;
      }
      case BF_METHOD_DEFORMED: {
        int s = bypass_sign;
        if (s == 0) {
          const SpectralModel model = lattice_model();
          const auto tr = extract_real_traces(model, k);
          s = tr.empty() ? 1 : choose_bypass_sign(tr.front(), model, k);
        }
        require(s == 1 || s == -1, "bypass sign must be -1, 0 or +1");
        g = green_deformed_surface(m, k, lattice_bypass_surface(k, s, 0.0),
                                   {256, 256, QuadratureRule::kTrapezoidPeriodic});
        break;
      }
      case BF_METHOD_RESIDUE:
        g = green_residue_series(m, k);
        break;
      default:
        fail(ErrorCode::kInvalidArgument, "unknown method");
    }
    put(g.value, re, im);
    if (est_error) *est_error = g.error;
  });
}

bf_status bf_lattice_farfield(double k, long m1, long m2, double* re, double* im,
                              int* n_terms) {
  return guarded([&] {
    const auto s = lattice_farfield_terms({m1, m2}, k);
    put(s.value, re, im);
    if (n_terms) *n_terms = static_cast<int>(s.terms.size());
  });
}

int bf_lattice_near_degenerate(double k, double tol) {
  return lattice_near_degenerate(k, tol) ? 1 : 0;
}

bf_status bf_traces_compute(double k, int grid, bf_traces** out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = nullptr;
    TraceOptions opt;
    if (grid > 0) opt.grid = grid;
    *out = make_traces(lattice_model(), k, opt).release();
  });
}

void bf_traces_free(bf_traces* t) { delete t; }

size_t bf_traces_count(const bf_traces* t) { return t ? t->traces.size() : 0; }

bf_status bf_traces_get(const bf_traces* t, size_t i, const double** xy, size_t* n,
                        int* closed, int* bypass_sign) {
  return guarded([&] {
    require(t != nullptr && i < t->traces.size(), "trace index");
    require(xy != nullptr && n != nullptr, "null output");
    *xy = t->xy[i].data();
    *n = t->traces[i].points.size();
    if (closed) *closed = t->traces[i].closed ? 1 : 0;
    if (bypass_sign) *bypass_sign = t->traces[i].bypass_sign;
  });
}

bf_status bf_canonical_extremum(const bf_regime* r, int kind, double* re, double* im) {
  return guarded([&] {
    require(kind == BF_EXTREMUM_MAX || kind == BF_EXTREMUM_MIN, "extremum kind");
    put(canonical_extremum(to_regime(r), kind == BF_EXTREMUM_MAX ? ExtremumKind::kMax
                                                                 : ExtremumKind::kMin),
        re, im);
  });
}

bf_status bf_canonical_hyperbolic(const bf_regime* r, double* re, double* im) {
  return guarded([&] { put(canonical_hyperbolic(to_regime(r)), re, im); });
}

bf_status bf_canonical_extremum_oracle(const bf_regime* r, int kind, double* re,
                                       double* im) {
  return guarded([&] {
    require(kind == BF_EXTREMUM_MAX || kind == BF_EXTREMUM_MIN, "extremum kind");
    put(canonical_extremum_oracle(
            to_regime(r), kind == BF_EXTREMUM_MAX ? ExtremumKind::kMax : ExtremumKind::kMin),
        re, im);
  });
}

bf_status bf_canonical_hyperbolic_oracle(const bf_regime* r, double* re, double* im) {
  return guarded([&] { put(canonical_hyperbolic_oracle(to_regime(r)), re, im); });
}

bf_status bf_dirac_triple(double alpha1, double alpha2, double rho, double out[6]) {
  return guarded([&] {
    put_triple(dirac_canonical_triple({alpha1, alpha2}, rho, rho > 0.0 ? 1 : -1), out);
  });
}

bf_status bf_dirac_triple_oracle(double alpha1, double alpha2, double rho,
                                 double out[6]) {
  return guarded([&] { put_triple(dirac_triple_oracle({alpha1, alpha2}, rho), out); });
}

bf_status bf_resonance_time_integral(double alpha1, double alpha2, double c, double t,
                                     double* re, double* im) {
  return guarded([&] { put(resonance_time_integral({alpha1, alpha2}, c, t), re, im); });
}

bf_status bf_resonance_time_oracle(double alpha1, double alpha2, double c, double t,
                                   double* re, double* im) {
  return guarded([&] { put(resonance_time_oracle({alpha1, alpha2}, c, t), re, im); });
}

void bf_lattice_td_defaults(bf_lattice_td_options* o) {
  if (!o) return;
  const LatticeTDOptions d;
  o->L = d.L;
  o->T = d.T;
  o->dt = d.dt;
  o->omega = d.omega;
  o->c = d.c;
  o->ramp_time = d.ramp_time;
  o->obs_m1 = 2;
  o->obs_m2 = 0;
}

bf_status bf_lattice_td_run(const bf_lattice_td_options* o, double* times, double* re,
                            double* im, size_t cap, size_t* n_written) {
  return guarded([&] {
    require(o != nullptr && n_written != nullptr, "null argument");
    LatticeTDOptions opt;
    opt.L = o->L;
    opt.T = o->T;
    opt.dt = o->dt;
    opt.omega = o->omega;
    opt.c = o->c;
    opt.ramp_time = o->ramp_time;
    opt.observers = {{o->obs_m1, o->obs_m2}};
    const auto r = lattice_time_domain(opt);
    const size_t n = std::min(cap, r.times.size());
    require(n == 0 || (times && re && im), "null sample buffers");
    for (size_t s = 0; s < n; ++s) {
      times[s] = r.times[s];
      re[s] = r.samples[0][s].real();
      im[s] = r.samples[0][s].imag();
    }
    *n_written = n;
  });
}

bf_status bf_fit_log_growth(const double* t, const double* y, size_t n, double t_lo,
                            double t_hi, double* a, double* b, double* r2) {
  return guarded([&] {
    require(t && y && a && b && r2, "null argument");
    const auto f = fit_log_growth(std::vector<double>(t, t + n),
                                  std::vector<double>(y, y + n), t_lo, t_hi);
    *a = f.a;
    *b = f.b;
    *r2 = f.r2;
  });
}

void bf_hex_defaults(bf_hex_params* p) {
  if (!p) return;
  const HexCellParams d;
  p->n = d.n;
  p->h = d.h;
  p->hole_i = d.hole_i;
  p->hole_j = d.hole_j;
  p->hole_radius = d.hole_radius;
}

bf_status bf_fem_create_hex(const bf_hex_params* p, int lumped, bf_fem** out) {
  return guarded([&] {
    require(p != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    const HexCellParams hp{p->n, p->h, p->hole_i, p->hole_j, p->hole_radius};
    auto f = std::make_unique<bf_fem>();
    f->op = std::make_unique<BlochOperator>(generate_hex_cell(hp), lumped != 0);
    *out = f.release();
  });
}

bf_status bf_fem_load(const char* mesh_path, int lumped, bf_fem** out) {
  return guarded([&] {
    require(mesh_path != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    auto f = std::make_unique<bf_fem>();
    f->op = std::make_unique<BlochOperator>(load_mesh(mesh_path), lumped != 0);
    *out = f.release();
  });
}

bf_status bf_fem_save_mesh(const bf_fem* f, const char* path) {
  return guarded([&] {
    require(f != nullptr && path != nullptr, "null argument");
    save_mesh(f->op->mesh(), path);
  });
}

void bf_fem_free(bf_fem* f) { delete f; }

int bf_fem_reduced_size(const bf_fem* f) { return f ? f->op->reduced_size() : 0; }

int bf_fem_grid_node(const bf_fem* f, int i, int j) {
  if (!f) return -1;
  const int a = f->op->mesh().node_at(i, j);
  if (a < 0) return -1;
  const auto& s = f->op->shift(a);
  if (s[0] != 0 || s[1] != 0) return -1;
  return f->op->reduced_index(a);
}

bf_status bf_fem_bands(const bf_fem* f, double xi1, double xi2, int n_bands,
                       double* lambda) {
  return guarded([&] {
    require(f != nullptr && lambda != nullptr, "null argument");
    const auto e = solve_bloch_eigen(*f->op, {xi1, xi2}, n_bands);
    for (int j = 0; j < n_bands; ++j) lambda[j] = e.lambda[j];
  });
}

bf_status bf_fem_traces(const bf_fem* f, int band, double k, int grid,
                        bf_traces** out) {
  return guarded([&] {
    require(f != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    TraceOptions opt;
    opt.grid = grid > 0 ? grid : 64;
    *out = make_traces(fem_band_model(*f->op, band), k, opt).release();
  });
}

bf_status bf_fem_find_cone(const bf_fem* f, int band, double lo1, double lo2,
                           double hi1, double hi2, bf_cone** out) {
  return guarded([&] {
    require(f != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    auto c = std::make_unique<bf_cone>();
    c->op = f->op.get();
    c->cone = analyze_cone(*f->op, band, {lo1, lo2}, {hi1, hi2});
    *out = c.release();
  });
}

void bf_cone_free(bf_cone* c) { delete c; }

bf_status bf_cone_get_info(const bf_cone* c, bf_cone_info* info) {
  return guarded([&] {
    require(c != nullptr && info != nullptr, "null argument");
    const auto& p = c->cone.point;
    const auto& n = c->cone.norm;
    info->xi1 = p.xi[0];
    info->xi2 = p.xi[1];
    info->lambda = p.lambda;
    info->kstar = p.k;
    info->rel_gap = p.rel_gap;
    info->trace_residual = n.trace_residual;
    info->C1 = n.C1;
    info->C2 = n.C2;
    info->C3 = n.C3;
    for (int i = 0; i < 4; ++i) info->Psi[i] = n.Psi[i / 2][i % 2];
    info->q1 = n.q1;
    info->q2_re = n.q2.real();
    info->q2_im = n.q2.imag();
    info->q3 = n.q3;
    info->q4_re = n.q4.real();
    info->q4_im = n.q4.imag();
  });
}

bf_status bf_cone_residual(const bf_cone* c, double radius, int rays, double* residual) {
  return guarded([&] {
    require(c != nullptr && residual != nullptr, "null argument");
    require(radius > 0.0 && rays > 0, "radius and rays must be positive");
    *residual = cone_residual(*c->op, c->cone.point, c->cone.norm, radius, rays);
  });
}

bf_status bf_cone_local_field(const bf_cone* c, int src, double k, long m1, long m2,
                              double* out) {
  return guarded([&] {
    require(c != nullptr && out != nullptr, "null argument");
    const auto u = dirac_local_field(c->cone, src, k, {m1, m2});
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      out[2 * i] = u[i].real();
      out[2 * i + 1] = u[i].imag();
    }
  });
}

void bf_td_defaults(bf_td_options* o) {
  if (!o) return;
  const TimeDomainOptions d;
  o->cells = d.cells;
  o->dt = d.dt;
  o->c = d.c;
  o->omega = d.omega;
  o->ramp_time = d.ramp_time;
  o->steps = d.steps;
  o->src_node = d.src_node;
  o->sponge_cells = d.sponge_cells;
  o->sponge_strength = d.sponge_strength;
}

bf_status bf_fem_time_domain(const bf_fem* f, const bf_td_options* o, bf_td** out) {
  return guarded([&] {
    require(f != nullptr && o != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    TimeDomainOptions t;
    t.cells = o->cells;
    t.dt = o->dt;
    t.c = o->c;
    t.omega = o->omega;
    t.ramp_time = o->ramp_time;
    t.steps = o->steps;
    t.src_node = o->src_node;
    t.sponge_cells = o->sponge_cells;
    t.sponge_strength = o->sponge_strength;
    auto r = std::make_unique<bf_td>();
    r->res = run_time_domain(*f->op, t);
    *out = r.release();
  });
}

void bf_td_free(bf_td* t) { delete t; }

bf_status bf_td_value(const bf_td* t, long m1, long m2, int node, double* re,
                      double* im) {
  return guarded([&] {
    require(t != nullptr, "null handle");
    put(t->res.at({m1, m2}, node), re, im);
  });
}

bf_status bf_td_summary(const bf_td* t, double out[5]) {
  return guarded([&] {
    require(t != nullptr && out != nullptr, "null argument");
    out[0] = t->res.t_end;
    out[1] = t->res.dt_limit;
    out[2] = t->res.energy;
    out[3] = t->res.work;
    out[4] = t->res.energy_balance;
  });
}

}  // extern "C"
