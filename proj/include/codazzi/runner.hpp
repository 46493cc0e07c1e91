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

#include <chrono>
#include <cmath>
#include <memory>

#include "codazzi/catalog.hpp"
#include "codazzi/config.hpp"
#include "codazzi/decompose.hpp"
#include "codazzi/report.hpp"

namespace codazzi {

/// Default tolerance per check; `codazzi_h` tightens in dual mode.
inline double default_tolerance(const std::string& check, const std::string& mode) {
  if (check == "structure") return 1e-4;
  if (check == "gauss") return 1e-5;
  if (check == "ricci") return 1e-5;
  if (check == "ricci_tensor") return 1e-5;
  if (check == "codazzi_h") return mode == "dual" ? 1e-8 : 1e-6;
  if (check == "codazzi") return 1e-4;
  if (check == "commutator") return 1e-4;
  if (check == "spectrum") return 1e-4;
  if (check == "parallelism") return 1e-6;
  if (check == "simons5") return 1e-6;
  if (check == "simons6") return 1e-3;
  if (check == "stokes") return 1e-6;
  if (check == "umbilicity") return 1e-8;
  if (check == "derdzinski") return 1e-4;
  if (check == "decompose") return 1e-6;
  throw ConfigError("no default tolerance for check '" + check + "'");
}

namespace detail {

inline PhiSpec phi_spec_from_config(const ScenarioConfig& c) {
  PhiSpec s;
  if (c.phi_kind == "h") {
    if (c.phi_scale != 1.0) {
      s.kind = PhiKind::ScaledSecondFundamental;
      s.scale = c.phi_scale;
    } else {
      s.kind = PhiKind::SecondFundamental;
    }
  } else if (c.phi_kind == "hessian") {
    s.kind = PhiKind::HessianPotential;
    s.potential = parse_expr(c.phi_f);
    s.base_curvature = c.phi_curvature;
  } else if (c.phi_kind == "random") {
    s.kind = PhiKind::RandomSymmetric;
    s.seed = c.seed;
  } else {
    s.kind = PhiKind::MetricTensor;
  }
  return s;
}

/// Lazily-built pipeline stages shared by the checks of one scenario.
struct Pipeline {
  ScenarioConfig cfg;
  ImmersionSpec imm;
  FrameContext fctx;
  std::unique_ptr<FrameField> F;
  std::unique_ptr<CurvatureField> R;
  std::unique_ptr<TensorBundle> hb;   // second fundamental form
  std::unique_ptr<TensorBundle> pb;   // configured phi field
  std::unique_ptr<SpectralField> sp;  // eigen data of the configured field

  TensorBundle::Mode tensor_mode() const {
    // Dual-mode tensor derivatives need a frozen normal gauge; an adapted
    // frame falls back to finite differences.
    if (cfg.mode == "dual" && !cfg.adapt) return TensorBundle::Mode::Dual;
    return TensorBundle::Mode::FiniteDifference;
  }

  const FrameField& frame() {
    if (!F) F = std::make_unique<FrameField>(fctx, imm.chart);
    return *F;
  }
  const CurvatureField& curvature() {
    frame();
    if (!R) R = std::make_unique<CurvatureField>(*F, cfg.fd_order);
    return *R;
  }
  const TensorBundle& h_bundle() {
    frame();
    if (!hb) {
      PhiSpec s;
      s.kind = PhiKind::SecondFundamental;
      hb = std::make_unique<TensorBundle>(*F, s, tensor_mode(), cfg.fd_order);
    }
    return *hb;
  }
  const TensorBundle& phi_bundle() {
    frame();
    if (!pb) {
      if (cfg.phi_kind == "h" && cfg.phi_scale == 1.0) return h_bundle();
      pb = std::make_unique<TensorBundle>(*F, phi_spec_from_config(cfg), tensor_mode(),
                                          cfg.fd_order);
    }
    return pb ? *pb : *hb;
  }
  const SpectralField& spectral() {
    if (!sp) sp = std::make_unique<SpectralField>(phi_bundle(), cfg.weights);
    return *sp;
  }
};

/// Intrinsic-oracle cross-check of the Gauss relation, sampled on a stride
/// chosen to keep roughly `target` interior points.
inline double gauss_oracle_probe(const FrameField& F, const CurvatureField& R, int fd_order,
                                 long target = 200) {
  const Grid& g = F.grid();
  const int n = F.n();
  const int marg = 2 * fd_margin(fd_order);
  long stride = std::max<long>(1, g.size() / target);
  double res = 0.0;
  for (long pt = 0; pt < g.size(); pt += stride) {
    if (!g.interior(pt, marg)) continue;
    std::vector<double> oracle = intrinsic_riemann_oracle_all(F, pt, fd_order);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            res = std::max(res, std::abs(R.R(pt, i, j, k, l) -
                                         oracle[size_t(((i * n + j) * n + k) * n + l)]));
  }
  return res;
}

}  // namespace detail

/// Execute the dependency-closed check pipeline for one scenario.  Failed
/// checks are recorded, never thrown; only structural errors (bad config,
/// degenerate immersion) abort.
inline VerificationReport run_scenario(const ScenarioConfig& cfg_in) {
  auto t0 = std::chrono::steady_clock::now();
  ScenarioConfig cfg = cfg_in;
  cfg.validate();

  detail::Pipeline pl;
  pl.cfg = cfg;
  pl.imm = catalog(cfg.immersion, cfg.params, cfg.exprs);
  if (!cfg.grid.empty()) {
    if (cfg.grid.size() == 1) {
      for (int k = 0; k < pl.imm.chart.n; ++k) pl.imm.chart.axis[size_t(k)].res = cfg.grid[0];
    } else if (int(cfg.grid.size()) == pl.imm.chart.n) {
      for (int k = 0; k < pl.imm.chart.n; ++k)
        pl.imm.chart.axis[size_t(k)].res = cfg.grid[size_t(k)];
    } else {
      throw ConfigError("config: grid override needs 1 or chart-dimension entries");
    }
  }
  pl.fctx.imm = pl.imm;
  pl.fctx.gauge.adapt_normal = cfg.adapt;
  {
    Grid g(pl.imm.chart);
    Vec mid = g.point(g.size() / 2);
    choose_normal_selection(pl.fctx, mid);
    choose_adapt_seed(pl.fctx, mid);
  }

  VerificationReport rep;
  rep.scenario = cfg;
  for (int k = 0; k < pl.imm.chart.n; ++k)
    rep.grid_used.push_back(pl.imm.chart.axis[size_t(k)].res);

  // Building the frame field is structural: any failure here aborts.
  pl.frame();

  const int ord = cfg.fd_order;
  for (const std::string& name : cfg.check_closure()) {
    CheckRecord rec;
    rec.name = name;
    rec.anchor = check_anchor(name);
    auto it = cfg.tol.find(name);
    rec.tolerance = it != cfg.tol.end() ? it->second : default_tolerance(name, cfg.mode);
    try {
      if (name == "structure") {
        StructureResidual sr = structure_equation_residual(pl.frame(), ord);
        rec.residual = std::max(sr.first, sr.second);
      } else if (name == "gauss") {
        rec.residual = std::max(pl.curvature().max_gauss_residual(),
                                detail::gauss_oracle_probe(pl.frame(), pl.curvature(), ord));
      } else if (name == "ricci") {
        rec.residual = pl.curvature().max_ricci_residual();
      } else if (name == "ricci_tensor") {
        rec.residual = pl.curvature().max_ricci_tensor_residual();
      } else if (name == "codazzi_h") {
        rec.residual = pl.h_bundle().codazzi_residual();
      } else if (name == "codazzi") {
        rec.residual = pl.phi_bundle().codazzi_residual();
      } else if (name == "commutator") {
        rec.residual = pl.phi_bundle().commutator_residual(pl.curvature());
      } else if (name == "spectrum") {
        rec.residual = cluster_eigenvalues(pl.spectral(), rec.tolerance).constancy_residual;
      } else if (name == "parallelism") {
        ParallelismResidual pr = parallelism_residual(pl.frame(), ord);
        rec.residual = std::max(pr.dphibar, pr.normal_conn);
      } else if (name == "simons5") {
        rec.residual =
            simons_residual_parallel(pl.phi_bundle(), pl.spectral(), pl.curvature(), ord);
      } else if (name == "simons6") {
        rec.residual =
            simons_residual_flat(pl.phi_bundle(), pl.spectral(), pl.curvature(), ord);
      } else if (name == "stokes") {
        const TensorBundle& t = pl.phi_bundle();
        const FrameField& F = pl.frame();
        const long N = F.grid().size();
        const int n = F.n();
        Field norm2(N, 1);
        for (long pt = 0; pt < N; ++pt) {
          double s = 0.0;
          for (int a = 0; a < t.slots(); ++a)
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j) s += t.phi(pt, a, i, j) * t.phi(pt, a, i, j);
          norm2.at(pt, 0) = s;
        }
        rec.residual = std::abs(integrate(F, scalar_laplacian_divergence(F, norm2, ord)));
      } else if (name == "umbilicity") {
        UmbilicityResidual ur = umbilicity_check(pl.phi_bundle());
        rec.residual = std::max(ur.deviation, ur.trace_variation);
      } else if (name == "derdzinski") {
        DerdzinskiResidual dr = derdzinski_residual(
            pl.phi_bundle(), pl.spectral(), cfg.derdzinski_index, ord, cfg.derdzinski_gap);
        rec.residual = dr.full;
      } else if (name == "decompose") {
        DecompositionTolerances dt;
        dt.residual = rec.tolerance;
        auto ts = cfg.tol.find("spectrum");
        if (ts != cfg.tol.end()) dt.cluster = ts->second;
        auto tp = cfg.tol.find("parallelism");
        if (tp != cfg.tol.end()) dt.parallel = tp->second;
        DecompositionReport dr =
            decomposition_report(pl.phi_bundle(), pl.spectral(), pl.curvature(), ord, dt);
        DecompositionSummary ds;
        ds.verdict = dr.verdict_string();
        ds.failed_gate = dr.failed_gate;
        ds.closed_chart = dr.closed_chart;
        ds.min_sectional = dr.min_sectional;
        ds.parallelism_dphibar = dr.parallelism.dphibar;
        ds.parallelism_normal_conn = dr.parallelism.normal_conn;
        ds.grad_integral = dr.integrals.grad_integral;
        ds.curv_integral = dr.integrals.curv_integral;
        ds.grad_pointwise = dr.integrals.grad_pointwise;
        ds.curv_pointwise = dr.integrals.curv_pointwise;
        ds.cross_block = dr.cross_block;
        ds.metric_independence = dr.metric_independence;
        ds.constancy_residual = dr.blocks.constancy_residual;
        ds.blocks = dr.blocks.blocks;
        rep.decomposition = ds;
        rec.residual = std::max(dr.cross_block, dr.metric_independence);
        rec.pass = dr.verdict == DecompositionVerdict::Decomposes;
        rep.checks.push_back(rec);
        continue;
      }
      rec.pass = rec.residual <= rec.tolerance;
    } catch (const GeometryError& e) {
      rec.error = e.what();
      rec.pass = false;
    }
    rep.checks.push_back(rec);
  }

  rep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

struct ConvergenceRow {
  int resolution = 0;
  std::map<std::string, double> residual;
  std::map<std::string, double> observed_order;  // vs the previous row
  std::map<std::string, bool> order_flag;        // fd-mode order < 1.5
};

/// Re-run the scenario at each resolution (applied to every chart axis) and
/// report residuals with observed convergence orders between adjacent rows.
inline std::vector<ConvergenceRow> convergence_study(const ScenarioConfig& cfg,
                                                     const std::vector<int>& resolutions) {
  if (resolutions.size() < 3)
    throw ConfigError("convergence study needs at least 3 resolutions");
  for (size_t i = 1; i < resolutions.size(); ++i)
    if (resolutions[i] <= resolutions[i - 1] || resolutions[i] % resolutions[i - 1] != 0)
      throw ConfigError("convergence study resolutions must be nested refinements");

  std::vector<ConvergenceRow> rows;
  for (size_t i = 0; i < resolutions.size(); ++i) {
    ScenarioConfig c = cfg;
    c.grid = {resolutions[i]};
    VerificationReport rep = run_scenario(c);
    ConvergenceRow row;
    row.resolution = resolutions[i];
    for (const CheckRecord& rec : rep.checks) row.residual[rec.name] = rec.residual;
    if (!rows.empty()) {
      double ratio = double(resolutions[i]) / double(resolutions[i - 1]);
      for (const auto& [name, r] : row.residual) {
        auto prev = rows.back().residual.find(name);
        if (prev == rows.back().residual.end()) continue;
        double denom = std::max(r, 1e-300);
        double order = std::log(prev->second / denom) / std::log(ratio);
        row.observed_order[name] = order;
        row.order_flag[name] = cfg.mode == "fd" && order < 1.5;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::ordered_json convergence_json(const std::vector<ConvergenceRow>& rows) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const ConvergenceRow& row : rows) {
    nlohmann::ordered_json rj;
    rj["resolution"] = row.resolution;
    rj["residual"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : row.residual) rj["residual"][k] = v;
    rj["observed_order"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : row.observed_order) rj["observed_order"][k] = v;
    rj["low_order_flags"] = nlohmann::ordered_json::array();
    for (const auto& [k, f] : row.order_flag)
      if (f) rj["low_order_flags"].push_back(k);
    j.push_back(rj);
  }
  return j;
}

}  // namespace codazzi
