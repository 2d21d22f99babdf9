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

/* C interface to the blochfar library. All functions return a bf_status;
 * on failure bf_last_error() holds a message for the calling thread. */
#ifndef BLOCHFAR_H_
#define BLOCHFAR_H_

#include <stddef.h>

#if defined(_WIN32)
#define BF_API __declspec(dllexport)
#else
#define BF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef int bf_status; /* 0 on success, otherwise a BF_E_* code */

enum {
  BF_OK = 0,
  BF_E_INVALID_ARGUMENT = 1,
  BF_E_SINGULAR_EVALUATION = 10,
  BF_E_NONCONVERGENT_QUADRATURE = 11,
  BF_E_EXTRAPOLATION_DIVERGED = 12,
  BF_E_SURFACE_HITS_SINGULARITY = 13,
  BF_E_INADMISSIBLE_SURFACE = 14,
  BF_E_DEGENERATE_WAVENUMBER = 15,
  BF_E_QUADRATURE_FAILURE = 16,
  BF_E_REGULARITY_VIOLATION = 20,
  BF_E_INCONSISTENT_ORIENTATION = 21,
  BF_E_ZERO_CURVATURE = 22,
  BF_E_TANGENTIAL_CROSSING = 23,
  BF_E_UNSUPPORTED = 24,
  BF_E_ON_ACTIVITY_BOUNDARY = 30,
  BF_E_NOT_PERPENDICULAR = 31,
  BF_E_DOMAIN_ERROR = 40,
  BF_E_AT_DEGENERACY = 41,
  BF_E_ON_QUADRANT_BOUNDARY = 42,
  BF_E_ZERO_RHO = 43,
  BF_E_INVALID_MODEL = 44,
  BF_E_DEGENERATE_TRIANGLE = 50,
  BF_E_BLOCK_MISMATCH = 51,
  BF_E_SOLVER_FAILURE = 52,
  BF_E_NO_DOUBLE_POINT = 53,
  BF_E_NOT_ELLIPTIC = 54,
  BF_E_INSTABILITY = 55,
  BF_E_MESH_ERROR = 56,
  BF_E_IO_ERROR = 60,
  BF_E_INTERNAL = 99
};

/* Error class of a status: 0 ok, 1 configuration, 2 degeneracy, 3 numerical. */
BF_API int bf_error_class(bf_status s);
BF_API const char* bf_error_name(bf_status s);
BF_API const char* bf_last_error(void);
BF_API const char* bf_version(void);

/* ---- square lattice Green's function ---- */
enum { BF_METHOD_KAPPA = 0, BF_METHOD_DEFORMED = 1, BF_METHOD_RESIDUE = 2 };

/* u(m) for wavenumber k. bypass_sign only affects BF_METHOD_DEFORMED
 * (0 selects the group-velocity rule). */
BF_API bf_status bf_lattice_green(int method, double k, long m1, long m2,
                                  int bypass_sign, double* re, double* im,
                                  double* est_error);
/* Far-field sum over stationary points for direction m. */
BF_API bf_status bf_lattice_farfield(double k, long m1, long m2, double* re,
                                     double* im, int* n_terms);
BF_API int bf_lattice_near_degenerate(double k, double tol);

/* ---- real traces ---- */
typedef struct bf_traces bf_traces;
BF_API bf_status bf_traces_compute(double k, int grid, bf_traces** out);
BF_API void bf_traces_free(bf_traces* t);
BF_API size_t bf_traces_count(const bf_traces* t);
/* xy points into storage owned by t: 2*n doubles (xi1, xi2 pairs). */
BF_API bf_status bf_traces_get(const bf_traces* t, size_t i, const double** xy,
                               size_t* n, int* closed, int* bypass_sign);

/* ---- canonical integrals near degeneracies ---- */
enum { BF_EXTREMUM_MAX = 0, BF_EXTREMUM_MIN = 1 };
typedef struct {
  double khat, kstar, Lambda, alpha1, alpha2; /* alpha = N * (alpha1, alpha2) */
  int N;
} bf_regime;

BF_API bf_status bf_canonical_extremum(const bf_regime* r, int kind, double* re,
                                       double* im);
BF_API bf_status bf_canonical_hyperbolic(const bf_regime* r, double* re, double* im);
/* Brute-force deformed-plane oracles for the same quantities. */
BF_API bf_status bf_canonical_extremum_oracle(const bf_regime* r, int kind,
                                              double* re, double* im);
BF_API bf_status bf_canonical_hyperbolic_oracle(const bf_regime* r, double* re,
                                                double* im);
/* out receives Re/Im of J0, J1, J2 (six doubles). */
BF_API bf_status bf_dirac_triple(double alpha1, double alpha2, double rho,
                                 double out[6]);
BF_API bf_status bf_dirac_triple_oracle(double alpha1, double alpha2, double rho,
                                        double out[6]);
BF_API bf_status bf_resonance_time_integral(double alpha1, double alpha2, double c,
                                            double t, double* re, double* im);
BF_API bf_status bf_resonance_time_oracle(double alpha1, double alpha2, double c,
                                          double t, double* re, double* im);

/* ---- lattice time domain ---- */
typedef struct {
  int L;
  double T, dt, omega, c, ramp_time;
  long obs_m1, obs_m2;
} bf_lattice_td_options;

BF_API void bf_lattice_td_defaults(bf_lattice_td_options* o);
/* Writes up to cap samples: times[s], re[s], im[s] (demodulated). */
BF_API bf_status bf_lattice_td_run(const bf_lattice_td_options* o, double* times,
                                   double* re, double* im, size_t cap,
                                   size_t* n_written);
BF_API bf_status bf_fit_log_growth(const double* t, const double* y, size_t n,
                                   double t_lo, double t_hi, double* a, double* b,
                                   double* r2);

/* ---- phononic FEM ---- */
typedef struct bf_fem bf_fem;
typedef struct {
  int n;
  double h;
  int hole_i, hole_j;
  double hole_radius;
} bf_hex_params;

BF_API void bf_hex_defaults(bf_hex_params* p);
BF_API bf_status bf_fem_create_hex(const bf_hex_params* p, int lumped, bf_fem** out);
BF_API bf_status bf_fem_load(const char* mesh_path, int lumped, bf_fem** out);
BF_API bf_status bf_fem_save_mesh(const bf_fem* f, const char* path);
BF_API void bf_fem_free(bf_fem* f);
BF_API int bf_fem_reduced_size(const bf_fem* f);
/* Reduced index of generator node (i, j); -1 if absent or not reduced. */
BF_API int bf_fem_grid_node(const bf_fem* f, int i, int j);
BF_API bf_status bf_fem_bands(const bf_fem* f, double xi1, double xi2, int n_bands,
                              double* lambda);

/* Real traces of band surface `band` at wavenumber k. */
BF_API bf_status bf_fem_traces(const bf_fem* f, int band, double k, int grid,
                               bf_traces** out);

/* A cone borrows its bf_fem, which must outlive it. */
typedef struct bf_cone bf_cone;
typedef struct {
  double xi1, xi2, lambda, kstar, rel_gap, trace_residual;
  double C1, C2, C3;
  double Psi[4]; /* row-major */
  double q1, q2_re, q2_im, q3, q4_re, q4_im;
} bf_cone_info;

BF_API bf_status bf_fem_find_cone(const bf_fem* f, int band, double lo1, double lo2,
                                  double hi1, double hi2, bf_cone** out);
BF_API void bf_cone_free(bf_cone* c);
BF_API bf_status bf_cone_get_info(const bf_cone* c, bf_cone_info* info);
BF_API bf_status bf_cone_residual(const bf_cone* c, double radius, int rays,
                                  double* residual);
/* Local field of one cone in cell (m1, m2): 2*reduced_size doubles,
 * interleaved re/im. */
BF_API bf_status bf_cone_local_field(const bf_cone* c, int src, double k, long m1,
                                     long m2, double* out);

typedef struct bf_td bf_td;
typedef struct {
  int cells;
  double dt, c, omega, ramp_time;
  int steps, src_node, sponge_cells;
  double sponge_strength;
} bf_td_options;

BF_API void bf_td_defaults(bf_td_options* o);
BF_API bf_status bf_fem_time_domain(const bf_fem* f, const bf_td_options* o,
                                    bf_td** out);
BF_API void bf_td_free(bf_td* t);
BF_API bf_status bf_td_value(const bf_td* t, long m1, long m2, int node, double* re,
                             double* im);
/* t_end, dt_limit, energy, work, energy_balance. */
BF_API bf_status bf_td_summary(const bf_td* t, double out[5]);

#ifdef __cplusplus
}
#endif

#endif /* BLOCHFAR_H_ */
