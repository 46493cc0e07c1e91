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

#include <optional>
#include <string>
#include <vector>

#include "codazzi/config.hpp"
#include "codazzi/decompose.hpp"
#include "json.hpp"

namespace codazzi {

/// One executed check: the identity it verifies, the measured peak residual,
/// the tolerance it was held to, and the verdict.
struct CheckRecord {
  std::string name;
  std::string anchor;     // which identity this certifies, in words
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string error;      // nonempty when the check could not run
};

/// Decomposition summary carried by the report when the `decompose` check ran.
struct DecompositionSummary {
  std::string verdict;
  std::string failed_gate;
  bool closed_chart = false;
  double min_sectional = 0.0;
  double parallelism_dphibar = 0.0;
  double parallelism_normal_conn = 0.0;
  double grad_integral = 0.0;
  double curv_integral = 0.0;
  double grad_pointwise = 0.0;
  double curv_pointwise = 0.0;
  double cross_block = 0.0;
  double metric_independence = 0.0;
  double constancy_residual = 0.0;
  std::vector<EigenBlock> blocks;
};

struct VerificationReport {
  ScenarioConfig scenario;
  std::vector<CheckRecord> checks;
  std::optional<DecompositionSummary> decomposition;
  double elapsed_seconds = 0.0;
  std::vector<int> grid_used;  // resolved per-axis resolution

  bool all_pass() const {
    for (const CheckRecord& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

/// Human-readable statement of the identity each check certifies.
inline std::string check_anchor(const std::string& name) {
  if (name == "structure") return "Cartan structure equations of the adapted frame";
  if (name == "gauss") return "Gauss equation: tangent curvature from the second fundamental form";
  if (name == "ricci") return "Ricci equation: normal curvature from shape-operator commutators";
  if (name == "ricci_tensor") return "Ricci tensor contraction of the Gauss equation";
  if (name == "codazzi_h") return "Codazzi equation for the second fundamental form";
  if (name == "codazzi") return "Codazzi symmetry of the configured tensor field";
  if (name == "commutator") return "second-covariant-derivative commutation against curvature";
  if (name == "spectrum") return "pointwise eigenvalue constancy of the configured field";
  if (name == "parallelism") return "parallel mean curvature (adapted normal direction)";
  if (name == "simons5") return "Simons identity, parallel mean curvature form";
  if (name == "simons6") return "Simons identity, flat normal bundle form";
  if (name == "stokes") return "vanishing integral of a Laplacian over a closed chart";
  if (name == "umbilicity") return "umbilicity: tensor is a constant multiple of the metric";
  if (name == "derdzinski") return "eigenvector transport formula for Codazzi tensors";
  if (name == "decompose") return "product decomposition along constant eigenvalue blocks";
  return "unknown check";
}

inline nlohmann::ordered_json scenario_json(const ScenarioConfig& c) {
  nlohmann::ordered_json j;
  j["immersion"] = c.immersion;
  j["params"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : c.params) j["params"][k] = v;
  j["exprs"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : c.exprs) j["exprs"][k] = v;
  j["grid"] = c.grid;
  j["mode"] = c.mode;
  j["fd_order"] = c.fd_order;
  j["adapt"] = c.adapt;
  j["seed"] = c.seed;
  j["checks"] = c.checks;
  j["tol"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : c.tol) j["tol"][k] = v;
  j["phi"] = {{"kind", c.phi_kind},
              {"f", c.phi_f},
              {"curvature", c.phi_curvature},
              {"scale", c.phi_scale}};
  j["weights"] = c.weights;
  j["derdzinski"] = {{"gap", c.derdzinski_gap}, {"index", c.derdzinski_index}};
  return j;
}

inline nlohmann::ordered_json report_json(const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = "codazzi-lab/1";
  j["scenario"] = scenario_json(r.scenario);
  j["scenario"]["grid_used"] = r.grid_used;
  j["checks"] = nlohmann::ordered_json::array();
  for (const CheckRecord& c : r.checks) {
    nlohmann::ordered_json rec;
    rec["name"] = c.name;
    rec["anchor"] = c.anchor;
    rec["residual"] = c.residual;
    rec["tolerance"] = c.tolerance;
    rec["pass"] = c.pass;
    if (!c.error.empty()) rec["error"] = c.error;
    j["checks"].push_back(rec);
  }
  if (r.decomposition) {
    const DecompositionSummary& d = *r.decomposition;
    nlohmann::ordered_json dj;
    dj["verdict"] = d.verdict;
    if (!d.failed_gate.empty()) dj["failed_gate"] = d.failed_gate;
    dj["closed_chart"] = d.closed_chart;
    dj["min_sectional"] = d.min_sectional;
    dj["parallelism"] = {{"dphibar", d.parallelism_dphibar},
                         {"normal_conn", d.parallelism_normal_conn}};
    dj["integrals"] = {{"grad", d.grad_integral},
                       {"curvature", d.curv_integral},
                       {"grad_pointwise", d.grad_pointwise},
                       {"curvature_pointwise", d.curv_pointwise}};
    dj["cross_block"] = d.cross_block;
    dj["metric_independence"] = d.metric_independence;
    dj["constancy_residual"] = d.constancy_residual;
    dj["blocks"] = nlohmann::ordered_json::array();
    for (const EigenBlock& b : d.blocks)
      dj["blocks"].push_back({{"eigenvalue", b.value}, {"multiplicity", b.multiplicity}});
    j["decomposition"] = dj;
  } else {
    j["decomposition"] = nullptr;
  }
  j["timing"] = {{"elapsed_seconds", r.elapsed_seconds}};
  return j;
}

/// JSON serialization (schema "codazzi-lab/1", stable key order).
inline std::string emit_report_json(const VerificationReport& r) {
  return report_json(r).dump(2) + "\n";
}

/// Markdown rendering of an already-serialized report.
inline std::string render_report_markdown(const nlohmann::ordered_json& j) {
  std::ostringstream out;
  const auto& sc = j.at("scenario");
  out << "# Verification report\n\n";
  out << "- immersion: `" << sc.at("immersion").get<std::string>() << "`\n";
  out << "- mode: " << sc.at("mode").get<std::string>() << " (stencil order "
      << sc.at("fd_order").get<int>() << ")\n";
  out << "- grid:";
  for (int g : sc.at("grid_used").get<std::vector<int>>()) out << " " << g;
  out << "\n\n";
  out << "| check | identity | residual | tolerance | pass |\n";
  out << "|---|---|---|---|---|\n";
  char buf[64];
  for (const auto& c : j.at("checks")) {
    std::snprintf(buf, sizeof buf, "%.3e", c.at("residual").get<double>());
    out << "| " << c.at("name").get<std::string>() << " | "
        << c.at("anchor").get<std::string>() << " | " << buf << " | ";
    std::snprintf(buf, sizeof buf, "%.1e", c.at("tolerance").get<double>());
    out << buf << " | " << (c.at("pass").get<bool>() ? "yes" : "**no**") << " |\n";
  }
  out << "\n";
  if (!j.at("decomposition").is_null()) {
    const auto& d = j.at("decomposition");
    out << "## Decomposition\n\n";
    out << "- verdict: **" << d.at("verdict").get<std::string>() << "**\n";
    if (d.contains("failed_gate"))
      out << "- failed gate: " << d.at("failed_gate").get<std::string>() << "\n";
    out << "- blocks:";
    for (const auto& b : d.at("blocks")) {
      std::snprintf(buf, sizeof buf, " (%.6g x%d)", b.at("eigenvalue").get<double>(),
                    b.at("multiplicity").get<int>());
      out << buf;
    }
    out << "\n\n";
  }
  std::snprintf(buf, sizeof buf, "%.2f", j.at("timing").at("elapsed_seconds").get<double>());
  out << "_elapsed: " << buf << " s_\n";
  return out.str();
}

inline std::string emit_report_markdown(const VerificationReport& r) {
  return render_report_markdown(report_json(r));
}

}  // namespace codazzi
