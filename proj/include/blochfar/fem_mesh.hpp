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

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "blochfar/spectral.hpp"

namespace blochfar {

enum class NodeTag { kInner, kLeft, kBottom, kRight, kUpper, kC1, kC2, kC3, kC4, kHole };

const char* tag_name(NodeTag t);
NodeTag tag_from_name(const std::string& s);

// One periodic cell. Corners: c1 origin, c2 = c1 + l, c3 = c1 + d + l,
// c4 = c1 + d. The hole boundary is a natural (Neumann) boundary.
struct CellMesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<NodeTag> tags;
  Vec2 d{}, l{};
  std::vector<std::pair<int, int>> left_right;    // (left, right)
  std::vector<std::pair<int, int>> bottom_upper;  // (bottom, upper)
  // Generator lattice indices (i, j) per node; empty for external meshes.
  std::vector<std::array<int, 2>> grid_index;

  void validate() const;
  int node_at(int i, int j) const;
  double area() const;
};

struct HexCellParams {
  int n = 8;            // triangle steps per cell side
  double h = 0.55;      // mesh step
  int hole_i = 4;       // hole centre, as a generator node
  int hole_j = 4;
  double hole_radius = 1.7 * 0.55;
};

// Rhombic cell of equilateral triangles with a circular Neumann hole;
// triangles with centroid inside the hole are removed.
CellMesh generate_hex_cell(const HexCellParams& p = {});

std::string mesh_to_json(const CellMesh& m);
CellMesh mesh_from_json(const std::string& text);
CellMesh load_mesh(const std::string& path);
void save_mesh(const CellMesh& m, const std::string& path);

}  // namespace blochfar
