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

// Minimal JSON-schema checker for the shipped schemas. Supports the subset they
// use: type, const, enum, required, properties, additionalProperties (bool),
// items, minItems, maxItems, minimum, maximum, exclusiveMinimum.
//
//   schema_check <schema.json> <document.json>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "json.hpp"

using json = nlohmann::json;

namespace {

bool has_type(const json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  if (t == "integer") return v.is_number_integer();
  if (t == "number") return v.is_number();
  return false;
}

void validate(const json& s, const json& v, const std::string& path,
              std::vector<std::string>& errs) {
  auto err = [&](const std::string& m) { errs.push_back(path + ": " + m); };
  if (s.contains("type")) {
    const json& t = s["type"];
    bool ok = false;
    if (t.is_string()) ok = has_type(v, t);
    for (const auto& x : t.is_array() ? t : json::array()) ok = ok || has_type(v, x);
    if (!ok) return err("expected type " + t.dump());
  }
  if (s.contains("const") && v != s["const"]) err("expected " + s["const"].dump());
  if (s.contains("enum")) {
    bool found = false;
    for (const auto& e : s["enum"]) found = found || e == v;
    if (!found) err("value " + v.dump() + " not in " + s["enum"].dump());
  }
  if (v.is_number()) {
    const double x = v.get<double>();
    if (s.contains("minimum") && x < s["minimum"].get<double>()) err("below minimum");
    if (s.contains("maximum") && x > s["maximum"].get<double>()) err("above maximum");
    if (s.contains("exclusiveMinimum") && x <= s["exclusiveMinimum"].get<double>())
      err("not above exclusiveMinimum");
  }
  if (v.is_object()) {
    for (const auto& r : s.value("required", json::array()))
      if (!v.contains(r.get<std::string>())) err("missing required field " + r.dump());
    const json props = s.value("properties", json::object());
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (props.contains(it.key())) {
        validate(props[it.key()], it.value(), path + "." + it.key(), errs);
      } else if (s.contains("additionalProperties") && s["additionalProperties"] == false) {
        err("unexpected field '" + it.key() + "'");
      }
    }
  }
  if (v.is_array()) {
    if (s.contains("minItems") && v.size() < s["minItems"].get<size_t>()) err("too few items");
    if (s.contains("maxItems") && v.size() > s["maxItems"].get<size_t>()) err("too many items");
    if (s.contains("items")) {
      for (size_t i = 0; i < v.size(); ++i)
        validate(s["items"], v[i], path + "[" + std::to_string(i) + "]", errs);
    }
  }
}

json load(const char* path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(std::string("cannot open ") + path);
  return json::parse(in);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: schema_check <schema.json> <document.json>\n";
    return 2;
  }
  try {
    std::vector<std::string> errs;
    validate(load(argv[1]), load(argv[2]), "$", errs);
    for (const auto& e : errs) std::cerr << argv[2] << " " << e << '\n';
    return errs.empty() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
}
