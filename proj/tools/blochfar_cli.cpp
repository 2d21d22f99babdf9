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

// blochfar command-line driver. Every command reads a JSON config, writes a
// table (CSV or JSON) plus <command>_summary.json into --out.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "blochfar.h"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;

enum Exit { kExitOk = 0, kExitConfig = 2, kExitDegeneracy = 3, kExitNumerical = 4 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Failure reported by the library; carries its status code.
struct LibError : std::runtime_error {
  bf_status status;
  LibError(bf_status s, const std::string& msg) : std::runtime_error(msg), status(s) {}
};

void check(bf_status s) {
  if (s != BF_OK) throw LibError(s, bf_last_error());
}

int exit_for(bf_status s) {
  switch (bf_error_class(s)) {
    case 0: return kExitOk;
    case 1: return kExitConfig;
    case 2: return kExitDegeneracy;
    default: return kExitNumerical;
  }
}

struct Options {
  std::string config;
  std::string out = ".";
  std::string format = "csv";
  int threads = 1;
  bool verbose = false;
};

Options g_opt;

void log(const std::string& msg) {
  if (g_opt.verbose) std::cerr << "[blochfar] " << msg << '\n';
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Numbers that are not finite become null in JSON output.
json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_atomic(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << text;
    if (!out) throw ConfigError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

// Writes name.csv or name.json depending on --format.
std::string write_table(const std::string& name, const Table& t) {
  std::ostringstream s;
  fs::path path = fs::path(g_opt.out) / name;
  if (g_opt.format == "json") {
    json arr = json::array();
    for (const auto& r : t.rows) {
      json row = json::object();
      for (size_t c = 0; c < t.header.size(); ++c) {
        const std::string& v = r[c];
        char* end = nullptr;
        const double d = std::strtod(v.c_str(), &end);
        if (!v.empty() && end && *end == '\0' && std::isfinite(d)) {
          if (v.find_first_of(".eE") == std::string::npos) {
            row[t.header[c]] = std::stoll(v);
          } else {
            row[t.header[c]] = d;
          }
        } else if (v == "nan" || v == "inf" || v == "-inf") {
          row[t.header[c]] = nullptr;
        } else {
          row[t.header[c]] = v;
        }
      }
      arr.push_back(std::move(row));
    }
    s << arr.dump(1) << '\n';
    path += ".json";
  } else {
    for (size_t c = 0; c < t.header.size(); ++c) s << (c ? "," : "") << t.header[c];
    s << '\n';
    for (const auto& r : t.rows) {
      for (size_t c = 0; c < r.size(); ++c) s << (c ? "," : "") << r[c];
      s << '\n';
    }
    path += ".csv";
  }
  write_atomic(path, s.str());
  log("wrote " + path.string());
  return path.filename().string();
}

void write_summary(const std::string& command, json results, const std::vector<std::string>& files,
                   const std::string& status = "ok") {
  json s;
  s["command"] = command;
  s["version"] = bf_version();
  s["status"] = status;
  s["files"] = files;
  s["results"] = std::move(results);
  write_atomic(fs::path(g_opt.out) / (command + "_summary.json"), s.dump(1) + "\n");
}

// ---- config access ----

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

template <class T>
T get(const json& j, const char* key, const T& def) {
  if (!j.contains(key)) return def;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

template <class T>
T need(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("config field '") + key + "' is required");
  return get<T>(j, key, T{});
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

std::vector<double> number_list(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("config field '") + key + "' is required");
  const json& v = j.at(key);
  if (v.is_number()) return {v.get<double>()};
  return get<std::vector<double>>(j, key, {});
}

std::vector<std::array<long, 2>> index_list(const json& j, const char* key) {
  std::vector<std::array<long, 2>> out;
  for (const auto& p : get<std::vector<std::vector<long>>>(j, key, {})) {
    require(p.size() == 2, std::string("entries of '") + key + "' must be pairs");
    out.push_back({p[0], p[1]});
  }
  return out;
}

// Deterministic parallel loop: each index owns its result slot.
void parallel_for(size_t n, const std::function<void(size_t)>& f) {
  const int nt = std::max(1, std::min<int>(g_opt.threads, static_cast<int>(n)));
  if (nt <= 1) {
    for (size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < n; i = next++) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

// ---- FEM handle from config ----

struct FemHandle {
  bf_fem* f = nullptr;
  ~FemHandle() { bf_fem_free(f); }
};

void open_fem(const json& cfg, FemHandle& h) {
  const bool lumped = get<bool>(cfg, "lumped", true);
  if (cfg.contains("mesh")) {
    check(bf_fem_load(get<std::string>(cfg, "mesh", "").c_str(), lumped ? 1 : 0, &h.f));
    return;
  }
  bf_hex_params p;
  bf_hex_defaults(&p);
  if (cfg.contains("cell")) {
    const json& c = cfg.at("cell");
    p.n = get<int>(c, "n", p.n);
    p.h = get<double>(c, "h", p.h);
    p.hole_i = get<int>(c, "hole_i", p.hole_i);
    p.hole_j = get<int>(c, "hole_j", p.hole_j);
    p.hole_radius = get<double>(c, "hole_radius", 1.7 * p.h);
  }
  check(bf_fem_create_hex(&p, lumped ? 1 : 0, &h.f));
  if (cfg.contains("save_mesh")) {
    const fs::path path = fs::path(g_opt.out) / get<std::string>(cfg, "save_mesh", "");
    fs::create_directories(path.parent_path());
    check(bf_fem_save_mesh(h.f, path.string().c_str()));
  }
}

int source_node(const json& cfg, const FemHandle& h) {
  const auto s = get<std::vector<int>>(cfg, "source", {6, 4});
  require(s.size() == 2, "'source' must be a generator node pair");
  const int r = bf_fem_grid_node(h.f, s[0], s[1]);
  require(r >= 0, "source node is not an interior node of the cell");
  return r;
}

struct ConeHandle {
  bf_cone* c = nullptr;
  ~ConeHandle() { bf_cone_free(c); }
};

// Default search boxes bracket the two hexagonal valleys +-(2pi/3, -2pi/3).
std::vector<std::array<double, 4>> cone_boxes(const json& cfg) {
  std::vector<std::array<double, 4>> boxes;
  if (cfg.contains("search_boxes")) {
    for (const auto& b : get<std::vector<std::vector<double>>>(cfg, "search_boxes", {})) {
      require(b.size() == 4, "search box is [lo1, lo2, hi1, hi2]");
      boxes.push_back({b[0], b[1], b[2], b[3]});
    }
  } else {
    const double a = 2.0 * kPi / 3.0, w = 0.5;
    boxes.push_back({a - w, -a - w, a + w, -a + w});
    boxes.push_back({-a - w, a - w, -a + w, a + w});
  }
  require(!boxes.empty(), "no cone search boxes");
  return boxes;
}

json cone_json(const bf_cone_info& c) {
  return {{"xi_star", {c.xi1, c.xi2}},
          {"lambda_star", c.lambda},
          {"k_star", c.kstar},
          {"relative_gap", c.rel_gap},
          {"trace_residual", c.trace_residual},
          {"C1", c.C1},
          {"C2", c.C2},
          {"C3", c.C3},
          {"Psi_star", {{c.Psi[0], c.Psi[1]}, {c.Psi[2], c.Psi[3]}}},
          {"q1", c.q1},
          {"q2", {c.q2_re, c.q2_im}},
          {"q3", c.q3},
          {"q4", {c.q4_re, c.q4_im}},
          {"q_constraints",
           {c.q1 * c.q1 + c.q2_re * c.q2_re + c.q2_im * c.q2_im - 1.0,
            c.q3 * c.q3 + c.q4_re * c.q4_re + c.q4_im * c.q4_im - 1.0,
            2.0 * (c.q4_re * c.q2_re + c.q4_im * c.q2_im) + 2.0 * c.q1 * c.q3}}};
}

// ---- commands ----

int cmd_traces(const json& cfg) {
  const std::string problem = get<std::string>(cfg, "problem", "lattice");
  require(problem == "lattice" || problem == "fem", "problem must be lattice or fem");
  const auto ks = number_list(cfg, "k");
  require(!ks.empty(), "'k' list is empty");
  for (double k : ks) require(k >= 0.0, "k must be non-negative");
  FemHandle fem;
  int band = 0, grid = get<int>(cfg, "grid", problem == "fem" ? 64 : 512);
  if (problem == "fem") {
    open_fem(cfg, fem);
    band = get<int>(cfg, "band", 0);
  }
  std::vector<std::string> files;
  json res = json::array();
  for (double k : ks) {
    bf_traces* t = nullptr;
    const bf_status s = problem == "fem" ? bf_fem_traces(fem.f, band, k, grid, &t)
                                         : bf_traces_compute(k, grid, &t);
    if (s != BF_OK) {
      bf_traces_free(t);
      throw LibError(s, "k = " + num(k) + ": " + bf_last_error());
    }
    Table tab{{"trace_id", "xi1", "xi2", "bypass_sign"}, {}};
    json entry{{"k", k}, {"traces", json::array()}};
    for (size_t i = 0; i < bf_traces_count(t); ++i) {
      const double* xy = nullptr;
      size_t n = 0;
      int closed = 0, sign = 0;
      check(bf_traces_get(t, i, &xy, &n, &closed, &sign));
      for (size_t p = 0; p < n; ++p) {
        tab.rows.push_back({std::to_string(i), num(xy[2 * p]), num(xy[2 * p + 1]),
                            std::to_string(sign)});
      }
      entry["traces"].push_back({{"points", n}, {"closed", closed != 0}, {"bypass_sign", sign}});
    }
    bf_traces_free(t);
    char name[64];
    std::snprintf(name, sizeof name, "traces_k%g", k);
    files.push_back(write_table(name, tab));
    res.push_back(std::move(entry));
  }
  write_summary("traces", {{"problem", problem}, {"per_k", res}}, files);
  return kExitOk;
}

const char* method_name(int m) {
  return m == BF_METHOD_KAPPA ? "kappa" : m == BF_METHOD_DEFORMED ? "deformed" : "residue";
}

int cmd_green(const json& cfg) {
  const double k = need<double>(cfg, "k");
  require(k >= 0.0, "k must be non-negative");
  std::vector<std::array<long, 2>> ms = index_list(cfg, "m");
  if (cfg.contains("patch")) {
    const long R = get<long>(cfg, "patch", 0);
    require(R >= 0 && R <= 200, "patch radius out of range");
    for (long a = -R; a <= R; ++a) {
      for (long b = -R; b <= R; ++b) ms.push_back({a, b});
    }
  }
  require(!ms.empty(), "give 'm' (list of pairs) or 'patch'");
  std::vector<int> methods;
  for (const auto& s : get<std::vector<std::string>>(cfg, "methods", {"kappa", "residue"})) {
    if (s == "kappa") methods.push_back(BF_METHOD_KAPPA);
    else if (s == "deformed") methods.push_back(BF_METHOD_DEFORMED);
    else if (s == "residue") methods.push_back(BF_METHOD_RESIDUE);
    else throw ConfigError("unknown method '" + s + "'");
  }
  const double tol = get<double>(cfg, "tolerance", 1e-5);
  const int bypass = get<int>(cfg, "bypass_sign", 0);
  require(bypass >= -1 && bypass <= 1, "bypass_sign must be -1, 0 or 1");
  struct Cell {
    cplx v;
    double err = 0.0;
    bf_status st = BF_OK;
    std::string msg;
  };
  const size_t nm = methods.size();
  std::vector<Cell> out(ms.size() * nm);
  parallel_for(out.size(), [&](size_t i) {
    const auto& m = ms[i / nm];
    double re = 0, im = 0, err = 0;
    Cell& c = out[i];
    c.st = bf_lattice_green(methods[i % nm], k, m[0], m[1], bypass, &re, &im, &err);
    if (c.st == BF_OK) {
      c.v = {re, im};
      c.err = err;
    } else {
      c.msg = bf_last_error();
    }
  });
  Table tab{{"m1", "m2", "re_u", "im_u", "method", "est_error", "error"}, {}};
  std::map<std::string, double> max_abs, max_rel;
  std::map<std::string, int> err_counts;
  int worst = kExitOk, disagreements = 0;
  for (size_t r = 0; r < ms.size(); ++r) {
    std::vector<std::string> flags(nm);
    for (size_t a = 0; a < nm; ++a) {
      for (size_t b = a + 1; b < nm; ++b) {
        const Cell& x = out[r * nm + a];
        const Cell& y = out[r * nm + b];
        if (x.st != BF_OK || y.st != BF_OK) continue;
        const std::string key = std::string(method_name(methods[a])) + "-" + method_name(methods[b]);
        const double d = std::abs(x.v - y.v);
        const double rel = d / std::max(std::abs(x.v), std::abs(y.v));
        max_abs[key] = std::max(max_abs[key], d);
        max_rel[key] = std::max(max_rel[key], rel);
        if (rel > tol) {
          flags[a] = flags[b] = "Disagreement";
          ++disagreements;
        }
      }
    }
    for (size_t a = 0; a < nm; ++a) {
      const Cell& c = out[r * nm + a];
      std::string e = flags[a];
      if (c.st != BF_OK) {
        e = bf_error_name(c.st);
        ++err_counts[e];
        worst = std::max(worst, exit_for(c.st));
        log(std::string(method_name(methods[a])) + " at (" + std::to_string(ms[r][0]) + "," +
            std::to_string(ms[r][1]) + "): " + c.msg);
      }
      tab.rows.push_back({std::to_string(ms[r][0]), std::to_string(ms[r][1]),
                          c.st == BF_OK ? num(c.v.real()) : "nan",
                          c.st == BF_OK ? num(c.v.imag()) : "nan", method_name(methods[a]),
                          c.st == BF_OK ? num(c.err) : "nan", e});
    }
  }
  json res{{"k", k}, {"points", ms.size()}, {"tolerance", tol}, {"disagreements", disagreements}};
  res["max_cross_difference"] = max_abs;
  res["max_cross_relative"] = max_rel;
  res["errors"] = err_counts;
  const auto file = write_table("green", tab);
  write_summary("green", res, {file}, worst == kExitOk ? "ok" : "row_errors");
  return worst;
}

int cmd_asympt_compare(const json& cfg) {
  const double k = need<double>(cfg, "k");
  auto dirs = index_list(cfg, "directions");
  if (dirs.empty()) dirs.push_back({1, 0});
  std::vector<double> Ns = get<std::vector<double>>(cfg, "N", {20, 30, 40, 60, 80, 100, 120});
  require(!Ns.empty(), "'N' list is empty");
  for (double n : Ns) require(n >= 1 && n == std::floor(n), "N values must be positive integers");
  struct Row {
    cplx direct, asym;
    bf_status st = BF_OK;
  };
  std::vector<Row> rows(dirs.size() * Ns.size());
  parallel_for(rows.size(), [&](size_t i) {
    const auto& d = dirs[i / Ns.size()];
    const long N = static_cast<long>(Ns[i % Ns.size()]);
    double re, im, err;
    int nt = 0;
    Row& r = rows[i];
    r.st = bf_lattice_green(BF_METHOD_RESIDUE, k, N * d[0], N * d[1], 0, &re, &im, &err);
    if (r.st != BF_OK) return;
    r.direct = {re, im};
    r.st = bf_lattice_farfield(k, N * d[0], N * d[1], &re, &im, &nt);
    r.asym = {re, im};
  });
  Table tab{{"dir1", "dir2", "N", "abs_direct", "abs_asympt", "rel_err"}, {}};
  json per = json::array();
  for (size_t di = 0; di < dirs.size(); ++di) {
    std::vector<double> lx, ly_dir, ly_asy;
    for (size_t ni = 0; ni < Ns.size(); ++ni) {
      const Row& r = rows[di * Ns.size() + ni];
      if (r.st != BF_OK) throw LibError(r.st, bf_error_name(r.st));
      const double ad = std::abs(r.direct), aa = std::abs(r.asym);
      const double rel = std::abs(r.direct - r.asym) / std::max(ad, 1e-300);
      tab.rows.push_back({std::to_string(dirs[di][0]), std::to_string(dirs[di][1]),
                          num(Ns[ni]), num(ad), num(aa), num(rel)});
      lx.push_back(std::log(Ns[ni]));
      ly_dir.push_back(std::log(std::max(ad, 1e-300)));
      ly_asy.push_back(aa > 0 ? std::log(aa) : NAN);
    }
    auto slope = [&](const std::vector<double>& y) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      const double n = static_cast<double>(y.size());
      for (size_t i = 0; i < y.size(); ++i) {
        sx += lx[i];
        sy += y[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * y[i];
      }
      return (sxy - sx * sy / n) / (sxx - sx * sx / n);
    };
    const double e_dir = lx.size() > 1 ? -slope(ly_dir) : NAN;
    const double e_asy = lx.size() > 1 ? -slope(ly_asy) : NAN;
    per.push_back({{"direction", dirs[di]},
                   {"decay_exponent_direct", jnum(e_dir)},
                   {"decay_exponent_asymptotic", jnum(e_asy)},
                   {"expected_exponent", 0.5}});
  }
  const auto file = write_table("asympt_compare", tab);
  write_summary("asympt_compare", {{"k", k}, {"directions", per}}, {file});
  return kExitOk;
}

int cmd_degeneracy(const json& cfg) {
  const std::string regime = need<std::string>(cfg, "regime");
  const bool oracle = get<bool>(cfg, "oracle", false);
  const json pts = cfg.value("points", json::array());
  require(pts.is_array() && !pts.empty(), "'points' must be a non-empty array");
  Table tab{{"index", "component", "re", "im", "oracle_re", "oracle_im", "rel_diff"}, {}};
  double worst = 0.0;
  auto add = [&](size_t i, const char* comp, cplx v, cplx o, bool have) {
    const double rd = have ? std::abs(v - o) / std::max(std::abs(o), 1e-300) : NAN;
    if (have) worst = std::max(worst, rd);
    tab.rows.push_back({std::to_string(i), comp, num(v.real()), num(v.imag()),
                        have ? num(o.real()) : "nan", have ? num(o.imag()) : "nan", num(rd)});
  };
  for (size_t i = 0; i < pts.size(); ++i) {
    const json& p = pts[i];
    const auto alpha = get<std::vector<double>>(p, "alpha", {});
    require(alpha.size() == 2, "each point needs 'alpha' = [a1, a2]");
    if (regime == "max" || regime == "min" || regime == "hyperbolic") {
      bf_regime r{need<double>(p, "khat"), get<double>(p, "kstar", 1.0),
                  get<double>(p, "Lambda", 1.0), alpha[0], alpha[1], get<int>(p, "N", 1)};
      double re, im, ore = 0, oim = 0;
      if (regime == "hyperbolic") {
        check(bf_canonical_hyperbolic(&r, &re, &im));
        if (oracle) check(bf_canonical_hyperbolic_oracle(&r, &ore, &oim));
      } else {
        const int kind = regime == "max" ? BF_EXTREMUM_MAX : BF_EXTREMUM_MIN;
        check(bf_canonical_extremum(&r, kind, &re, &im));
        if (oracle) check(bf_canonical_extremum_oracle(&r, kind, &ore, &oim));
      }
      add(i, "I", {re, im}, {ore, oim}, oracle);
    } else if (regime == "dirac") {
      const double rho = need<double>(p, "rho");
      double v[6], o[6] = {};
      check(bf_dirac_triple(alpha[0], alpha[1], rho, v));
      if (oracle) check(bf_dirac_triple_oracle(alpha[0], alpha[1], rho, o));
      const char* names[3] = {"J0", "J1", "J2"};
      for (int c = 0; c < 3; ++c) {
        add(i, names[c], {v[2 * c], v[2 * c + 1]}, {o[2 * c], o[2 * c + 1]}, oracle);
      }
    } else if (regime == "time") {
      const double c = get<double>(p, "c", 1.0), t = need<double>(p, "t");
      double re, im, ore = 0, oim = 0;
      check(bf_resonance_time_integral(alpha[0], alpha[1], c, t, &re, &im));
      if (oracle) check(bf_resonance_time_oracle(alpha[0], alpha[1], c, t, &ore, &oim));
      add(i, "I_time", {re, im}, {ore, oim}, oracle);
    } else {
      throw ConfigError("regime must be max, min, hyperbolic, dirac or time");
    }
  }
  const auto file = write_table("degeneracy", tab);
  json res{{"regime", regime}, {"points", pts.size()}, {"oracle", oracle}};
  res["max_rel_diff"] = oracle ? jnum(worst) : json(nullptr);
  write_summary("degeneracy", res, {file});
  return kExitOk;
}

int cmd_fem_bands(const json& cfg) {
  FemHandle fem;
  open_fem(cfg, fem);
  const int nb = get<int>(cfg, "bands", 4);
  const int grid = get<int>(cfg, "grid", 64);
  require(nb >= 1 && nb <= bf_fem_reduced_size(fem.f), "band count out of range");
  require(grid >= 2 && grid <= 1024, "grid out of range");
  std::vector<double> lam(static_cast<size_t>(grid) * grid * nb);
  std::vector<bf_status> st(static_cast<size_t>(grid) * grid, BF_OK);
  auto xi = [&](int i) { return -kPi + 2.0 * kPi * i / grid; };
  parallel_for(st.size(), [&](size_t p) {
    st[p] = bf_fem_bands(fem.f, xi(static_cast<int>(p / grid)), xi(static_cast<int>(p % grid)),
                         nb, &lam[p * nb]);
  });
  Table tab{{"xi1", "xi2"}, {}};
  for (int b = 0; b < nb; ++b) tab.header.push_back("lambda" + std::to_string(b));
  std::vector<double> lo(nb, INFINITY), hi(nb, -INFINITY), gap(nb > 1 ? nb - 1 : 0, INFINITY);
  for (size_t p = 0; p < st.size(); ++p) {
    check(st[p]);
    std::vector<std::string> row{num(xi(static_cast<int>(p / grid))),
                                 num(xi(static_cast<int>(p % grid)))};
    for (int b = 0; b < nb; ++b) {
      const double v = lam[p * nb + b];
      row.push_back(num(v));
      lo[b] = std::min(lo[b], v);
      hi[b] = std::max(hi[b], v);
      if (b > 0) gap[b - 1] = std::min(gap[b - 1], v - lam[p * nb + b - 1]);
    }
    tab.rows.push_back(std::move(row));
  }
  const auto file = write_table("fem_bands", tab);
  json res{{"reduced_size", bf_fem_reduced_size(fem.f)}, {"grid", grid}, {"bands", nb}};
  res["band_min"] = lo;
  res["band_max"] = hi;
  res["min_adjacent_gap"] = gap;
  write_summary("fem_bands", res, {file});
  return kExitOk;
}

int cmd_fem_dirac(const json& cfg) {
  FemHandle fem;
  open_fem(cfg, fem);
  const int band = get<int>(cfg, "band", 0);
  const int src = source_node(cfg, fem);
  const double dl = get<double>(cfg, "dlambda", 1e-3);
  const double radius = get<double>(cfg, "residual_radius", 1e-3);
  std::vector<ConeHandle> cones;
  const auto boxes = cone_boxes(cfg);
  cones.resize(boxes.size());
  json cj = json::array();
  double lambda_star = 0.0;
  for (size_t i = 0; i < boxes.size(); ++i) {
    const auto& b = boxes[i];
    check(bf_fem_find_cone(fem.f, band, b[0], b[1], b[2], b[3], &cones[i].c));
    bf_cone_info info;
    check(bf_cone_get_info(cones[i].c, &info));
    double resid = 0.0;
    check(bf_cone_residual(cones[i].c, radius, 16, &resid));
    json j = cone_json(info);
    j["cone_residual"] = resid;
    j["residual_radius"] = radius;
    cj.push_back(std::move(j));
    lambda_star = info.lambda;
  }
  const double k = std::sqrt(lambda_star - dl);
  auto ms = index_list(cfg, "cells");
  if (ms.empty()) {
    const long R = get<long>(cfg, "patch", 10);
    require(R >= 1 && R <= 200, "patch radius out of range");
    for (long a = -R; a <= R; ++a) {
      for (long b = -R; b <= R; ++b) {
        if (a != 0 || b != 0) ms.push_back({a, b});
      }
    }
  }
  const int nr = bf_fem_reduced_size(fem.f);
  const bool all_nodes = get<bool>(cfg, "all_nodes", false);
  Table tab{{"m1", "m2", "node", "re", "im"}, {}};
  std::vector<double> buf(2 * nr);
  for (const auto& m : ms) {
    std::vector<cplx> u(nr, 0.0);
    for (auto& c : cones) {
      check(bf_cone_local_field(c.c, src, k, m[0], m[1], buf.data()));
      for (int r = 0; r < nr; ++r) u[r] += cplx(buf[2 * r], buf[2 * r + 1]);
    }
    for (int r = 0; r < nr; ++r) {
      if (!all_nodes && r != src) continue;
      tab.rows.push_back({std::to_string(m[0]), std::to_string(m[1]), std::to_string(r),
                          num(u[r].real()), num(u[r].imag())});
    }
  }
  const auto file = write_table("fem_dirac_field", tab);
  write_summary("fem_dirac",
                {{"cones", cj}, {"dlambda", dl}, {"k", k}, {"source_node", src}, {"cells", ms.size()}},
                {file});
  return kExitOk;
}

int timedomain_lattice(const json& cfg) {
  bf_lattice_td_options o;
  bf_lattice_td_defaults(&o);
  o.L = get<int>(cfg, "L", o.L);
  o.T = get<double>(cfg, "T", o.T);
  o.dt = get<double>(cfg, "dt", o.dt);
  o.omega = get<double>(cfg, "omega", o.omega);
  o.c = get<double>(cfg, "c", o.c);
  o.ramp_time = get<double>(cfg, "ramp_time", o.ramp_time);
  const auto obs = get<std::vector<long>>(cfg, "observer", {2, 0});
  require(obs.size() == 2, "observer must be a pair");
  o.obs_m1 = obs[0];
  o.obs_m2 = obs[1];
  require(o.dt > 0 && o.T > 0, "dt and T must be positive");
  const size_t cap = static_cast<size_t>(std::llround(o.T / o.dt)) + 1;
  std::vector<double> t(cap), re(cap), im(cap), a(cap);
  size_t n = 0;
  check(bf_lattice_td_run(&o, t.data(), re.data(), im.data(), cap, &n));
  const int every = std::max(1, get<int>(cfg, "output_every", 10));
  Table tab{{"t", "re", "im", "abs"}, {}};
  for (size_t s = 0; s < n; ++s) {
    a[s] = std::hypot(re[s], im[s]);
    if (s % every == 0 || s + 1 == n) {
      tab.rows.push_back({num(t[s]), num(re[s]), num(im[s]), num(a[s])});
    }
  }
  double fa = 0, fb = 0, r2 = 0;
  check(bf_fit_log_growth(t.data(), a.data(), n, o.T / 100.0, o.T, &fa, &fb, &r2));
  const auto file = write_table("timedomain_lattice", tab);
  write_summary("timedomain",
                {{"problem", "lattice"},
                 {"fit", {{"a", fa}, {"b", fb}, {"r2", r2}, {"window", {o.T / 100.0, o.T}}}},
                 {"L", o.L}, {"T", o.T}, {"dt", o.dt}, {"omega", o.omega}},
                {file});
  return kExitOk;
}

int timedomain_fem(const json& cfg) {
  FemHandle fem;
  open_fem(cfg, fem);
  bf_td_options o;
  bf_td_defaults(&o);
  o.cells = get<int>(cfg, "cells", o.cells);
  o.steps = get<int>(cfg, "steps", o.steps);
  o.dt = get<double>(cfg, "dt", o.dt);
  o.c = get<double>(cfg, "c", o.c);
  o.ramp_time = get<double>(cfg, "ramp_time", o.ramp_time);
  o.sponge_cells = get<int>(cfg, "sponge_cells", o.sponge_cells);
  o.sponge_strength = get<double>(cfg, "sponge_strength", o.sponge_strength);
  o.src_node = source_node(cfg, fem);
  const double dl = get<double>(cfg, "dlambda", 1e-3);
  std::vector<ConeHandle> cones;
  const auto boxes = cone_boxes(cfg);
  cones.resize(boxes.size());
  double lambda_star = 0.0;
  for (size_t i = 0; i < boxes.size(); ++i) {
    const auto& b = boxes[i];
    check(bf_fem_find_cone(fem.f, get<int>(cfg, "band", 0), b[0], b[1], b[2], b[3],
                           &cones[i].c));
    bf_cone_info info;
    check(bf_cone_get_info(cones[i].c, &info));
    lambda_star = info.lambda;
  }
  const double k = std::sqrt(lambda_star - dl);
  o.omega = o.c * k;
  log("running " + std::to_string(o.cells) + "^2 cells for " + std::to_string(o.steps) + " steps");
  bf_td* td = nullptr;
  check(bf_fem_time_domain(fem.f, &o, &td));
  std::unique_ptr<bf_td, void (*)(bf_td*)> hold(td, bf_td_free);
  double summary[5];
  check(bf_td_summary(td, summary));
  const auto ring = get<std::vector<double>>(cfg, "compare_ring", {20.0, 35.0});
  require(ring.size() == 2 && ring[0] < ring[1], "compare_ring is [r_lo, r_hi]");
  const int nr = bf_fem_reduced_size(fem.f);
  std::vector<double> buf(2 * nr);
  const long half = o.cells / 2;
  Table tab{{"m1", "m2", "re_td", "im_td", "re_asympt", "im_asympt"}, {}};
  double num2 = 0.0, den2 = 0.0;
  for (long a = -half; a < o.cells - half; ++a) {
    for (long b = -half; b < o.cells - half; ++b) {
      double re, im;
      if (bf_td_value(td, a, b, o.src_node, &re, &im) != BF_OK) continue;
      const double dist = std::hypot(a + 0.5 * b, 0.5 * std::sqrt(3.0) * b);
      cplx asym = NAN;
      if (a != 0 || b != 0) {
        std::vector<cplx> u(nr, 0.0);
        for (auto& c : cones) {
          check(bf_cone_local_field(c.c, o.src_node, k, a, b, buf.data()));
          for (int r = 0; r < nr; ++r) u[r] += cplx(buf[2 * r], buf[2 * r + 1]);
        }
        asym = u[o.src_node];
        if (dist >= ring[0] && dist <= ring[1]) {
          for (int r = 0; r < nr; ++r) {
            double tr, ti;
            check(bf_td_value(td, a, b, r, &tr, &ti));
            num2 += std::norm(u[r] - cplx(tr, ti));
            den2 += std::norm(u[r]);
          }
        }
      }
      tab.rows.push_back({std::to_string(a), std::to_string(b), num(re), num(im),
                          num(asym.real()), num(asym.imag())});
    }
  }
  const double rel = den2 > 0 ? std::sqrt(num2 / den2) : NAN;
  const auto file = write_table("timedomain_fem", tab);
  write_summary("timedomain",
                {{"problem", "fem"},
                 {"cells", o.cells},
                 {"steps", o.steps},
                 {"dt", o.dt},
                 {"omega", o.omega},
                 {"dlambda", dl},
                 {"t_end", summary[0]},
                 {"dt_limit", summary[1]},
                 {"energy", summary[2]},
                 {"net_work", summary[3]},
                 {"energy_balance", summary[4]},
                 {"compare_ring", ring},
                 {"relative_error_vs_asymptotic", jnum(rel)}},
                {file});
  return kExitOk;
}

int cmd_timedomain(const json& cfg) {
  const std::string problem = get<std::string>(cfg, "problem", "fem");
  if (problem == "lattice") return timedomain_lattice(cfg);
  require(problem == "fem", "problem must be lattice or fem");
  return timedomain_fem(cfg);
}

void report_error(const std::string& command, const std::string& name, int code,
                  const std::string& msg) {
  json e{{"command", command}, {"error", name}, {"code", code}, {"message", msg}};
  std::cerr << e.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"blochfar: lattice and phononic-crystal Green's functions"};
  app.require_subcommand(1);
  const std::vector<std::pair<std::string, std::function<int(const json&)>>> commands = {
      {"traces", cmd_traces},
      {"green", cmd_green},
      {"asympt_compare", cmd_asympt_compare},
      {"degeneracy", cmd_degeneracy},
      {"fem_bands", cmd_fem_bands},
      {"fem_dirac", cmd_fem_dirac},
      {"timedomain", cmd_timedomain}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, fn] : commands) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", g_opt.config, "JSON config file")->required();
    sub->add_option("--out", g_opt.out, "output directory");
    sub->add_option("--format", g_opt.format, "table format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", g_opt.threads, "worker threads")->check(CLI::Range(1, 256));
    sub->add_flag("--verbose", g_opt.verbose, "progress on stderr");
    subs.push_back(sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }
  for (size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    const std::string& name = commands[i].first;
    try {
      const json cfg = load_config(g_opt.config);
      require(cfg.is_object(), "config must be a JSON object");
      return commands[i].second(cfg);
    } catch (const ConfigError& e) {
      report_error(name, "ConfigError", kExitConfig, e.what());
      return kExitConfig;
    } catch (const LibError& e) {
      report_error(name, bf_error_name(e.status), e.status, e.what());
      return exit_for(e.status);
    } catch (const std::exception& e) {
      report_error(name, "Internal", BF_E_INTERNAL, e.what());
      return kExitNumerical;
    }
  }
  return kExitConfig;
}
