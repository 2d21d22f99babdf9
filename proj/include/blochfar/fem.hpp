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

#include <Eigen/Dense>
#include <vector>

#include "blochfar/fem_mesh.hpp"

namespace blochfar {

// P1 cell matrices for -Laplace with natural boundary conditions.
struct CellMatrices {
  Eigen::MatrixXd K0;
  Eigen::MatrixXd M0;        // consistent mass
  Eigen::VectorXd M_lumped;  // row sums of M0
};

CellMatrices assemble_cell_matrices(const CellMesh& mesh);

// Sparse entry of the Bloch template: contributes val * exp(i dp . xi).
struct TemplateEntry {
  int row = 0, col = 0;
  double val = 0.0;
  int dp1 = 0, dp2 = 0;
};

// Quasi-periodic reduction: node a of the full cell carries
// F_a = exp(-i p_a . xi) Fhat_{red(a)}.
class BlochOperator {
 public:
  BlochOperator(const CellMesh& mesh, bool lumped_mass = true);

  int full_size() const { return static_cast<int>(red_of_.size()); }
  int reduced_size() const { return n_red_; }
  bool lumped() const { return lumped_; }
  int reduced_index(int full_node) const { return red_of_.at(full_node); }
  const std::array<int, 2>& shift(int full_node) const { return shift_.at(full_node); }
  int full_node(int reduced) const { return full_of_red_.at(reduced); }

  Eigen::MatrixXcd K(const Vec2& xi) const;
  Eigen::MatrixXcd M(const Vec2& xi) const;
  // d K / d xi_i at xi.
  Eigen::MatrixXcd dK(int i, const Vec2& xi) const;
  // Reference reduction P^H A P by explicit dense products.
  Eigen::MatrixXcd reduce_dense(const Eigen::MatrixXd& A, const Vec2& xi) const;

  const CellMatrices& cell() const { return cell_; }
  const std::vector<TemplateEntry>& k_template() const { return k_tpl_; }
  const std::vector<TemplateEntry>& m_template() const { return m_tpl_; }
  const CellMesh& mesh() const { return mesh_; }

 private:
  Eigen::MatrixXcd build(const std::vector<TemplateEntry>& tpl, const Vec2& xi,
                         int deriv) const;

  CellMesh mesh_;
  CellMatrices cell_;
  bool lumped_;
  int n_red_ = 0;
  std::vector<int> red_of_;
  std::vector<std::array<int, 2>> shift_;
  std::vector<int> full_of_red_;
  std::vector<TemplateEntry> k_tpl_, m_tpl_;
};

struct BlochEigen {
  Eigen::VectorXd lambda;  // ascending, lambda = k^2
  Eigen::MatrixXcd V;      // M-orthonormal columns
};

// Lowest n_bands eigenpairs; each vector's largest-modulus entry is made
// real and positive.
BlochEigen solve_bloch_eigen(const BlochOperator& op, const Vec2& xi, int n_bands);

struct DoublePoint {
  Vec2 xi{};
  int band = 0;      // lower band index of the pair (0-based)
  double lambda = 0.0;
  double k = 0.0;
  double rel_gap = 0.0;
  Eigen::MatrixXcd V;  // two M-orthonormal vectors of the double eigenvalue
};

struct DoublePointOptions {
  int coarse = 24;
  double gap_tol = 1e-8;
  int max_iter = 400;
};

// Minimises the relative gap between bands band and band+1 over the box.
DoublePoint find_double_eigenvalue(const BlochOperator& op, int band,
                                   const Vec2& lo, const Vec2& hi,
                                   const DoublePointOptions& opt = {});

// Band surface as a spectral model: g = k^2 - lambda_band(xi) on real xi,
// gradient by Hellmann-Feynman. The operator must outlive the model.
SpectralModel fem_band_model(const BlochOperator& op, int band);

}  // namespace blochfar
