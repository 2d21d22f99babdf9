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

#include "blochfar/fem_mesh.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace blochfar {

namespace {

constexpr const char* kTagNames[] = {"inner", "left", "bottom", "right", "upper",
                                     "c1",    "c2",   "c3",     "c4",    "hole"};

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

}  // namespace

const char* tag_name(NodeTag t) { return kTagNames[static_cast<int>(t)]; }

NodeTag tag_from_name(const std::string& s) {
  for (int i = 0; i < 10; ++i) {
    if (s == kTagNames[i]) return static_cast<NodeTag>(i);
  }
  fail(ErrorCode::kMeshError, "unknown node tag '" + s + "'");
}

void CellMesh::validate() const {
  const int n = static_cast<int>(nodes.size());
  if (n == 0 || triangles.empty()) fail(ErrorCode::kMeshError, "empty mesh");
  if (static_cast<int>(tags.size()) != n) {
    fail(ErrorCode::kMeshError, "tag list length differs from node count");
  }
  int corners[4] = {0, 0, 0, 0};
  int count[10] = {};
  for (auto t : tags) {
    ++count[static_cast<int>(t)];
    if (t >= NodeTag::kC1 && t <= NodeTag::kC4) {
      ++corners[static_cast<int>(t) - static_cast<int>(NodeTag::kC1)];
    }
  }
  for (int c : corners) {
    if (c != 1) fail(ErrorCode::kMeshError, "each corner tag must appear once");
  }
  const double scale = std::hypot(d[0], d[1]) + std::hypot(l[0], l[1]);
  auto check_pairs = [&](const std::vector<std::pair<int, int>>& pairs,
                         NodeTag lo, NodeTag hi, const Vec2& shift,
                         const char* what) {
    if (static_cast<int>(pairs.size()) != count[static_cast<int>(lo)] ||
        static_cast<int>(pairs.size()) != count[static_cast<int>(hi)]) {
      fail(ErrorCode::kMeshError, std::string(what) + " pairing is incomplete");
    }
    for (auto [a, b] : pairs) {
      if (a < 0 || b < 0 || a >= n || b >= n || tags[a] != lo || tags[b] != hi) {
        fail(ErrorCode::kMeshError, std::string(what) + " pairing has bad tags");
      }
      const double e = std::hypot(nodes[b][0] - nodes[a][0] - shift[0],
                                  nodes[b][1] - nodes[a][1] - shift[1]);
      if (e > 1e-9 * scale) {
        fail(ErrorCode::kMeshError,
             std::string(what) + " pair is not a lattice translate");
      }
    }
  };
  check_pairs(left_right, NodeTag::kLeft, NodeTag::kRight, d, "left/right");
  check_pairs(bottom_upper, NodeTag::kBottom, NodeTag::kUpper, l, "bottom/upper");
  int c[4];
  for (int i = 0; i < n; ++i) {
    if (tags[i] >= NodeTag::kC1 && tags[i] <= NodeTag::kC4) {
      c[static_cast<int>(tags[i]) - static_cast<int>(NodeTag::kC1)] = i;
    }
  }
  const Vec2 off[4] = {{0, 0}, l, {d[0] + l[0], d[1] + l[1]}, d};
  for (int q = 1; q < 4; ++q) {
    const double e = std::hypot(nodes[c[q]][0] - nodes[c[0]][0] - off[q][0],
                                nodes[c[q]][1] - nodes[c[0]][1] - off[q][1]);
    if (e > 1e-9 * scale) fail(ErrorCode::kMeshError, "corners misplaced");
  }
  for (const auto& t : triangles) {
    for (int v : t) {
      if (v < 0 || v >= n) fail(ErrorCode::kMeshError, "triangle index range");
    }
    const double a = signed_area(nodes[t[0]], nodes[t[1]], nodes[t[2]]);
    if (std::abs(a) < 1e-14) {
      fail(ErrorCode::kDegenerateTriangle, "triangle with zero area");
    }
    if (a < 0.0) fail(ErrorCode::kMeshError, "triangle is negatively oriented");
  }
}

int CellMesh::node_at(int i, int j) const {
  for (size_t a = 0; a < grid_index.size(); ++a) {
    if (grid_index[a][0] == i && grid_index[a][1] == j) return static_cast<int>(a);
  }
  return -1;
}

double CellMesh::area() const {
  double s = 0.0;
  for (const auto& t : triangles) {
    s += signed_area(nodes[t[0]], nodes[t[1]], nodes[t[2]]);
  }
  return s;
}

CellMesh generate_hex_cell(const HexCellParams& p) {
  if (p.n < 2 || !(p.h > 0.0) || !(p.hole_radius >= 0.0)) {
    fail(ErrorCode::kInvalidArgument, "bad cell parameters");
  }
  const int n = p.n;
  const double s3 = std::sqrt(3.0) / 2.0;
  auto pos = [&](double i, double j) -> Vec2 {
    return {p.h * (i + 0.5 * j), p.h * s3 * j};
  };
  const Vec2 centre = pos(p.hole_i, p.hole_j);
  std::map<std::pair<int, int>, int> id;
  std::vector<std::array<std::pair<int, int>, 3>> kept;
  std::map<std::pair<int, int>, bool> touches_hole;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::array<std::pair<int, int>, 3> tris[2] = {
          {{{i, j}, {i + 1, j}, {i, j + 1}}},
          {{{i + 1, j}, {i + 1, j + 1}, {i, j + 1}}}};
      for (const auto& t : tris) {
        double cx = 0.0, cy = 0.0;
        for (auto [a, b] : t) {
          const Vec2 q = pos(a, b);
          cx += q[0] / 3.0;
          cy += q[1] / 3.0;
        }
        if (std::hypot(cx - centre[0], cy - centre[1]) < p.hole_radius) {
          for (auto v : t) touches_hole[v] = true;
        } else {
          kept.push_back(t);
        }
      }
    }
  }
  CellMesh m;
  m.d = {p.h * n, 0.0};
  m.l = {0.5 * p.h * n, s3 * p.h * n};
  for (const auto& t : kept) {
    for (auto v : t) id.emplace(v, 0);
  }
  int next = 0;
  for (auto& [key, value] : id) value = next++;
  m.nodes.resize(next);
  m.tags.resize(next);
  m.grid_index.resize(next);
  for (const auto& [key, a] : id) {
    const auto [i, j] = key;
    m.nodes[a] = pos(i, j);
    m.grid_index[a] = {i, j};
    NodeTag t = NodeTag::kInner;
    if (i == 0 && j == 0) t = NodeTag::kC1;
    else if (i == 0 && j == n) t = NodeTag::kC2;
    else if (i == n && j == n) t = NodeTag::kC3;
    else if (i == n && j == 0) t = NodeTag::kC4;
    else if (i == 0) t = NodeTag::kLeft;
    else if (i == n) t = NodeTag::kRight;
    else if (j == 0) t = NodeTag::kBottom;
    else if (j == n) t = NodeTag::kUpper;
    else if (touches_hole.count(key)) t = NodeTag::kHole;
    if (t != NodeTag::kInner && t != NodeTag::kHole && touches_hole.count(key)) {
      fail(ErrorCode::kMeshError, "hole reaches the cell boundary");
    }
    m.tags[a] = t;
  }
  for (const auto& t : kept) {
    m.triangles.push_back({id[t[0]], id[t[1]], id[t[2]]});
  }
  for (int j = 1; j < n; ++j) {
    const auto L = id.find({0, j}), R = id.find({n, j});
    if (L == id.end() || R == id.end()) {
      fail(ErrorCode::kMeshError, "boundary node removed by the hole");
    }
    m.left_right.push_back({L->second, R->second});
  }
  for (int i = 1; i < n; ++i) {
    const auto B = id.find({i, 0}), U = id.find({i, n});
    if (B == id.end() || U == id.end()) {
      fail(ErrorCode::kMeshError, "boundary node removed by the hole");
    }
    m.bottom_upper.push_back({B->second, U->second});
  }
  m.validate();
  return m;
}

std::string mesh_to_json(const CellMesh& m) {
  nlohmann::json j;
  j["format"] = "blochfar-cell-mesh";
  j["version"] = 1;
  j["lattice"] = {{"d", {m.d[0], m.d[1]}}, {"l", {m.l[0], m.l[1]}}};
  auto& nodes = j["nodes"] = nlohmann::json::array();
  for (const auto& p : m.nodes) nodes.push_back({p[0], p[1]});
  auto& tris = j["triangles"] = nlohmann::json::array();
  for (const auto& t : m.triangles) tris.push_back({t[0], t[1], t[2]});
  auto& tags = j["tags"] = nlohmann::json::array();
  for (auto t : m.tags) tags.push_back(tag_name(t));
  auto& lr = j["periodic"]["left_right"] = nlohmann::json::array();
  for (auto [a, b] : m.left_right) lr.push_back({a, b});
  auto& bu = j["periodic"]["bottom_upper"] = nlohmann::json::array();
  for (auto [a, b] : m.bottom_upper) bu.push_back({a, b});
  if (!m.grid_index.empty()) {
    auto& gi = j["grid_index"] = nlohmann::json::array();
    for (const auto& g : m.grid_index) gi.push_back({g[0], g[1]});
  }
  return j.dump(1);
}

CellMesh mesh_from_json(const std::string& text) {
  CellMesh m;
  try {
    const auto j = nlohmann::json::parse(text);
    const auto& lat = j.at("lattice");
    m.d = {lat.at("d").at(0).get<double>(), lat.at("d").at(1).get<double>()};
    m.l = {lat.at("l").at(0).get<double>(), lat.at("l").at(1).get<double>()};
    for (const auto& p : j.at("nodes")) {
      m.nodes.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    for (const auto& t : j.at("triangles")) {
      m.triangles.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
    }
    for (const auto& t : j.at("tags")) m.tags.push_back(tag_from_name(t.get<std::string>()));
    for (const auto& p : j.at("periodic").at("left_right")) {
      m.left_right.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
    }
    for (const auto& p : j.at("periodic").at("bottom_upper")) {
      m.bottom_upper.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
    }
    if (j.contains("grid_index")) {
      for (const auto& g : j.at("grid_index")) {
        m.grid_index.push_back({g.at(0).get<int>(), g.at(1).get<int>()});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kMeshError, std::string("mesh JSON: ") + e.what());
  }
  m.validate();
  return m;
}

CellMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot open mesh file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return mesh_from_json(ss.str());
}

void save_mesh(const CellMesh& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIoError, "cannot write mesh file " + path);
  out << mesh_to_json(m) << '\n';
}

}  // namespace blochfar
