// Copyright 2026 codazzi-lab developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "codazzi/core.hpp"

namespace codazzi {

/// The checks the scenario runner knows how to execute, in canonical
/// pipeline order (prerequisites always precede dependents).
inline const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> k = {
      "structure", "gauss",      "ricci",     "ricci_tensor", "codazzi_h",
      "codazzi",   "commutator", "spectrum",  "parallelism",  "simons5",
      "simons6",   "stokes",     "umbilicity", "derdzinski",  "decompose"};
  return k;
}

/// Prerequisites implied by each check; the runner expands the closure.
inline const std::map<std::string, std::vector<std::string>>& check_prerequisites() {
  static const std::map<std::string, std::vector<std::string>> deps = {
      {"structure", {}},
      {"gauss", {"structure"}},
      {"ricci", {"structure"}},
      {"ricci_tensor", {"gauss"}},
      {"codazzi_h", {"structure"}},
      {"codazzi", {"structure"}},
      {"commutator", {"codazzi"}},
      {"spectrum", {"codazzi"}},
      {"parallelism", {"structure"}},
      {"simons5", {"spectrum"}},
      {"simons6", {"spectrum"}},
      {"stokes", {"spectrum"}},
      {"umbilicity", {"codazzi"}},
      {"derdzinski", {"spectrum"}},
      {"decompose", {"spectrum", "parallelism"}},
  };
  return deps;
}

/// Flat scenario description: which immersion, at what resolution, in which
/// differentiation mode, with which checks and tolerance overrides.  The
/// file format is one dotted key per line ("key = value"), "#" comments.
struct ScenarioConfig {
  std::string immersion = "round_sphere";
  ParamMap params;                                  // immersion.params.*
  std::map<std::string, std::string> exprs;         // immersion.exprs.*
  std::vector<int> grid;                            // grid.n1, grid.n2, ... (empty = catalog default)
  std::string mode = "dual";                        // dual | fd
  int fd_order = 8;                                 // stencil order for all grid derivatives
  bool adapt = false;                               // rotate the normal frame to the mean curvature
  unsigned seed = 42;                               // negative-control / self-test seed
  std::vector<std::string> checks;                  // subset of known_checks()
  std::map<std::string, double> tol;                // tol.<check> overrides
  std::string phi_kind = "h";                       // h | hessian | random | metric
  std::string phi_f;                                // potential for phi_kind = hessian
  double phi_curvature = 0.0;                       // ambient constant for the hessian field
  double phi_scale = 1.0;
  std::vector<double> weights = {1.0};              // eigenframe combination weights
  double derdzinski_gap = 0.1;                      // eigenvalue-gap mask for transport checks
  int derdzinski_index = 0;                         // which eigenfield to transport

  bool operator==(const ScenarioConfig&) const = default;

  void validate() const {
    if (mode != "dual" && mode != "fd")
      throw ConfigError("config: mode must be 'dual' or 'fd'");
    if (fd_order != 2 && fd_order != 4 && fd_order != 6 && fd_order != 8 && fd_order != 10)
      throw ConfigError("config: fd.order must be one of 2, 4, 6, 8, 10");
    if (phi_kind != "h" && phi_kind != "hessian" && phi_kind != "random" &&
        phi_kind != "metric")
      throw ConfigError("config: phi.kind must be h, hessian, random, or metric");
    if (phi_kind == "hessian" && phi_f.empty())
      throw ConfigError("config: phi.kind = hessian needs phi.f");
    const auto& known = known_checks();
    for (const std::string& c : checks)
      if (std::find(known.begin(), known.end(), c) == known.end())
        throw ConfigError("config: unknown check '" + c + "'");
    for (const auto& [name, v] : tol) {
      if (!(v > 0)) throw ConfigError("config: tol." + name + " must be positive");
      if (std::find(known.begin(), known.end(), name) == known.end())
        throw ConfigError("config: tolerance for unknown check '" + name + "'");
    }
    for (int r : grid)
      if (r < 8) throw ConfigError("config: grid resolution must be >= 8");
    if (weights.empty()) throw ConfigError("config: weights must be nonempty");
  }

  /// Check list closed under prerequisites, in canonical pipeline order.
  std::vector<std::string> check_closure() const {
    std::set<std::string> want(checks.begin(), checks.end());
    bool grew = true;
    while (grew) {
      grew = false;
      for (const std::string& c : std::vector<std::string>(want.begin(), want.end()))
        for (const std::string& d : check_prerequisites().at(c))
          grew = want.insert(d).second || grew;
    }
    std::vector<std::string> out;
    for (const std::string& c : known_checks())
      if (want.count(c)) out.push_back(c);
    return out;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double parse_number(const std::string& key, const std::string& v, int line) {
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config line " + std::to_string(line) + ": " + key +
                      " needs a number, got '" + v + "'");
  }
}

}  // namespace detail

/// Parse the dotted-key scenario format.  Errors carry the line number and
/// offending key.
inline ScenarioConfig parse_scenario(const std::string& text) {
  ScenarioConfig c;
  c.weights.clear();
  std::stringstream ss(text);
  std::string raw;
  int line = 0;
  bool weights_seen = false;
  while (std::getline(ss, raw)) {
    ++line;
    std::string s = raw;
    size_t hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = detail::trim(s);
    if (s.empty()) continue;
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line) + ": expected 'key = value'");
    std::string key = detail::trim(s.substr(0, eq));
    std::string val = detail::trim(s.substr(eq + 1));
    auto num = [&] { return detail::parse_number(key, val, line); };
    if (key == "immersion.name") {
      c.immersion = val;
    } else if (key.rfind("immersion.params.", 0) == 0) {
      c.params[key.substr(17)] = num();
    } else if (key.rfind("immersion.exprs.", 0) == 0) {
      c.exprs[key.substr(16)] = val;
    } else if (key.rfind("grid.n", 0) == 0) {
      size_t axis = 0;
      try {
        axis = std::stoul(key.substr(6));
      } catch (const std::exception&) {
        throw ConfigError("config line " + std::to_string(line) + ": bad key '" + key + "'");
      }
      if (axis < 1 || axis > kMaxChartDim)
        throw ConfigError("config line " + std::to_string(line) + ": bad axis in '" + key + "'");
      if (c.grid.size() < axis) c.grid.resize(axis, 0);
      c.grid[axis - 1] = static_cast<int>(num());
    } else if (key == "mode") {
      c.mode = val;
    } else if (key == "fd.order") {
      c.fd_order = static_cast<int>(num());
    } else if (key == "gauge.adapt") {
      c.adapt = num() != 0.0;
    } else if (key == "seed") {
      c.seed = static_cast<unsigned>(num());
    } else if (key == "checks") {
      c.checks = detail::split_list(val);
    } else if (key.rfind("tol.", 0) == 0) {
      c.tol[key.substr(4)] = num();
    } else if (key == "phi.kind") {
      c.phi_kind = val;
    } else if (key == "phi.f") {
      c.phi_f = val;
    } else if (key == "phi.curvature") {
      c.phi_curvature = num();
    } else if (key == "phi.scale") {
      c.phi_scale = num();
    } else if (key == "weights") {
      weights_seen = true;
      for (const std::string& w : detail::split_list(val))
        c.weights.push_back(detail::parse_number(key, w, line));
    } else if (key == "derdzinski.gap") {
      c.derdzinski_gap = num();
    } else if (key == "derdzinski.index") {
      c.derdzinski_index = static_cast<int>(num());
    } else {
      throw ConfigError("config line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
  }
  if (!weights_seen) c.weights = {1.0};
  for (int r : c.grid)
    if (r == 0) throw ConfigError("config: grid axes must be contiguous from grid.n1");
  c.validate();
  return c;
}

/// Emit in the same dotted-key format, stable ordering; parse(emit(c)) == c.
inline std::string emit_scenario(const ScenarioConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "immersion.name = " << c.immersion << "\n";
  for (const auto& [k, v] : c.params) out << "immersion.params." << k << " = " << v << "\n";
  for (const auto& [k, v] : c.exprs) out << "immersion.exprs." << k << " = " << v << "\n";
  for (size_t i = 0; i < c.grid.size(); ++i)
    out << "grid.n" << (i + 1) << " = " << c.grid[i] << "\n";
  out << "mode = " << c.mode << "\n";
  out << "fd.order = " << c.fd_order << "\n";
  out << "gauge.adapt = " << (c.adapt ? 1 : 0) << "\n";
  out << "seed = " << c.seed << "\n";
  if (!c.checks.empty()) {
    out << "checks = ";
    for (size_t i = 0; i < c.checks.size(); ++i)
      out << (i ? ", " : "") << c.checks[i];
    out << "\n";
  }
  for (const auto& [k, v] : c.tol) out << "tol." << k << " = " << v << "\n";
  out << "phi.kind = " << c.phi_kind << "\n";
  if (!c.phi_f.empty()) out << "phi.f = " << c.phi_f << "\n";
  if (c.phi_curvature != 0.0) out << "phi.curvature = " << c.phi_curvature << "\n";
  if (c.phi_scale != 1.0) out << "phi.scale = " << c.phi_scale << "\n";
  out << "weights = ";
  for (size_t i = 0; i < c.weights.size(); ++i) out << (i ? ", " : "") << c.weights[i];
  out << "\n";
  out << "derdzinski.gap = " << c.derdzinski_gap << "\n";
  out << "derdzinski.index = " << c.derdzinski_index << "\n";
  return out.str();
}

}  // namespace codazzi
