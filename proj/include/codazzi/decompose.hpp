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

#include <map>
#include <optional>
#include <random>
#include <vector>

#include "codazzi/spectral.hpp"

namespace codazzi {

struct EigenBlock {
  double value = 0.0;    // median eigenvalue of the cluster
  int multiplicity = 0;
  int start = 0;         // first sorted eigenvalue index in the cluster
};

struct BlockStructure {
  std::vector<EigenBlock> blocks;
  double constancy_residual = 0.0;  // max over indices of grid spread
  bool constant = false;            // spread below tolerance for every index

  int count() const { return static_cast<int>(blocks.size()); }
};

/// Cluster the (descending) eigenvalue medians by gap > eps and measure how
/// far each eigenvalue field is from constant over the grid.
inline BlockStructure cluster_eigenvalues(const SpectralField& sp, double eps) {
  BlockStructure out;
  std::vector<double> med = sp.median_eigenvalues();
  std::vector<double> spread = sp.constancy_residuals();
  for (double s : spread) out.constancy_residual = std::max(out.constancy_residual, s);
  out.constant = out.constancy_residual <= eps;
  const int n = static_cast<int>(med.size());
  int start = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || med[size_t(i - 1)] - med[size_t(i)] > eps) {
      EigenBlock b;
      b.start = start;
      b.multiplicity = i - start;
      double s = 0.0;
      for (int k = start; k < i; ++k) s += med[size_t(k)];
      b.value = s / b.multiplicity;
      out.blocks.push_back(b);
      start = i;
    }
  }
  return out;
}

/// Cross-block connection residual via spectral projectors: for each cluster
/// b, P_b = sum_{i in b} v_i v_i^T and (grad_k P)^i_j = e_k(P^i_j)
/// + [omega_k, P]^i_j.  For projectors onto parallel distributions this is
/// zero; its size is exactly the off-diagonal (cross-block) connection, but
/// evaluated gauge-invariantly (no eigenvector continuation inside blocks).
inline double cross_block_connection_residual(const SpectralField& sp,
                                              const BlockStructure& bs, int fd_order) {
  const FrameField& F = sp.frame_field();
  const int n = F.n();
  const long N = F.grid().size();
  if (bs.count() < 2) return 0.0;
  double res = 0.0;
  for (const EigenBlock& b : bs.blocks) {
    Field P(N, n * n);
    for (long pt = 0; pt < N; ++pt)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double v = 0.0;
          for (int m = b.start; m < b.start + b.multiplicity; ++m)
            v += sp.evec(pt, m, i) * sp.evec(pt, m, j);
          P.at(pt, i * n + j) = v;
        }
    for (int k = 0; k < n; ++k) {
      Field dP = F.frame_derivative(P, k, fd_order);
      for (long pt = 0; pt < N; ++pt) {
        if (!F.grid().interior(pt, fd_margin(fd_order))) continue;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            double v = dP.at(pt, i * n + j);
            for (int m = 0; m < n; ++m)
              v += F.gamma(pt, i, m, k) * P.at(pt, m * n + j) -
                   P.at(pt, i * n + m) * F.gamma(pt, m, j, k);
            res = std::max(res, std::abs(v));
          }
      }
    }
  }
  return res;
}

struct DerdzinskiResidual {
  double full = 0.0;       // three-term eigenvector formula
  double subspace = 0.0;   // |(I - P) grad_v u| invariant-subspace form
  long points = 0;         // unmasked interior points that contributed
};

/// Residual of the eigenvector transport formula
/// A(grad_v u) = lambda grad_v u + dlambda(v) u - <u,v> grad lambda
/// for u = v = eigenfield `index` of the first tensor slot.  Points whose
/// stencil neighborhood contains an eigenvalue gap below `gap_tol` are
/// masked (eigenvector fields stop being smooth there).
inline DerdzinskiResidual derdzinski_residual(const TensorBundle& phi,
                                              const SpectralField& sp, int index,
                                              int fd_order, double gap_tol) {
  const FrameField& F = phi.frame_field();
  const Grid& grid = F.grid();
  const int n = F.n();
  const long N = grid.size();
  const int marg = fd_margin(fd_order);

  Field lam(N, 1), u(N, n);
  for (long pt = 0; pt < N; ++pt) {
    lam.at(pt, 0) = sp.lambda(pt, index);
    for (int k = 0; k < n; ++k) u.at(pt, k) = sp.evec(pt, index, k);
  }
  // Frame gradient of lambda.
  Field dlam(N, n);
  for (int k = 0; k < n; ++k) {
    Field d = F.frame_derivative(lam, k, fd_order);
    for (long pt = 0; pt < N; ++pt) dlam.at(pt, k) = d.at(pt, 0);
  }

  // Central stencil weights: df ~ sum_s w[s-1] (f(+s) - f(-s)) / h.
  static const std::map<int, std::vector<double>> kStencil = {
      {2, {1.0 / 2}},
      {4, {2.0 / 3, -1.0 / 12}},
      {6, {45.0 / 60, -9.0 / 60, 1.0 / 60}},
      {8, {672.0 / 840, -168.0 / 840, 32.0 / 840, -3.0 / 840}},
      {10, {2100.0 / 2520, -600.0 / 2520, 150.0 / 2520, -25.0 / 2520, 2.0 / 2520}}};
  const std::vector<double>& w = kStencil.at(fd_order);

  DerdzinskiResidual out;
  for (long pt = 0; pt < N; ++pt) {
    if (!grid.interior(pt, marg)) continue;
    // Mask: the whole stencil box must stay away from eigenvalue crossings.
    bool masked = false;
    std::array<int, kMaxChartDim> off{};
    auto scan = [&](auto&& self, int axis) -> void {
      if (masked) return;
      if (axis == n) {
        long q = pt;
        for (int k = 0; k < n; ++k) q = grid.shifted(q, k, off[size_t(k)]);
        if (sp.gap(q) < gap_tol) masked = true;
        return;
      }
      for (int o = -marg; o <= marg; ++o) {
        off[size_t(axis)] = o;
        self(self, axis + 1);
      }
    };
    scan(scan, 0);
    if (masked) continue;

    // Chart partials of the eigenfield with per-stencil sign alignment:
    // eigenvectors carry no preferred global sign, so align each neighbor
    // with the center vector before differencing.
    std::array<std::array<double, kMaxChartDim>, kMaxChartDim> du{};  // [axis][comp]
    for (int ax = 0; ax < n; ++ax) {
      const double h = grid.step(ax);
      for (int s = 1; s <= int(w.size()); ++s) {
        long qp = grid.shifted(pt, ax, s), qm = grid.shifted(pt, ax, -s);
        double dp = 0.0, dm = 0.0;
        for (int c = 0; c < n; ++c) {
          dp += u.at(qp, c) * u.at(pt, c);
          dm += u.at(qm, c) * u.at(pt, c);
        }
        double sp_ = dp < 0 ? -1.0 : 1.0, sm = dm < 0 ? -1.0 : 1.0;
        for (int c = 0; c < n; ++c)
          du[size_t(ax)][size_t(c)] +=
              w[size_t(s - 1)] * (sp_ * u.at(qp, c) - sm * u.at(qm, c)) / h;
      }
    }
    // grad_v u with u = v = the chosen eigenfield.
    Vec cov(n);
    for (int m = 0; m < n; ++m) {
      double v = 0.0;
      for (int k = 0; k < n; ++k) {
        double ek = 0.0;
        for (int ax = 0; ax < n; ++ax)
          ek += F.chart_comp(pt, ax, k) * du[size_t(ax)][size_t(m)];
        for (int r = 0; r < n; ++r) ek += F.gamma(pt, m, r, k) * u.at(pt, r);
        v += u.at(pt, k) * ek;
      }
      cov[m] = v;
    }
    double dl_v = 0.0;
    for (int k = 0; k < n; ++k) dl_v += u.at(pt, k) * dlam.at(pt, k);
    double full = 0.0, sub = 0.0;
    for (int i = 0; i < n; ++i) {
      double Acov = 0.0;
      for (int j = 0; j < n; ++j) Acov += phi.phi(pt, 0, i, j) * cov[j];
      double r = Acov - lam.at(pt, 0) * cov[i] - dl_v * u.at(pt, i) + dlam.at(pt, i);
      full = std::max(full, std::abs(r));
      // Invariant-subspace form: component of grad_v u outside the
      // eigenspace; with a simple eigenvalue that space is span(u).
      double proj = 0.0;
      for (int j = 0; j < n; ++j) proj += u.at(pt, j) * cov[j];
      sub = std::max(sub, std::abs(cov[i] - proj * u.at(pt, i)));
    }
    out.full = std::max(out.full, full);
    out.subspace = std::max(out.subspace, sub);
    ++out.points;
  }
  return out;
}

struct UmbilicityResidual {
  double deviation = 0.0;  // max |phi_ij - (tr/n) delta_ij|
  double trace_variation = 0.0;
};

/// How far the first tensor slot is from a constant multiple of the metric.
inline UmbilicityResidual umbilicity_check(const TensorBundle& phi) {
  const FrameField& F = phi.frame_field();
  const int n = F.n();
  double tmin = std::numeric_limits<double>::infinity(), tmax = -tmin;
  UmbilicityResidual out;
  for (long pt = 0; pt < F.grid().size(); ++pt) {
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += phi.phi(pt, 0, i, i);
    tr /= n;
    tmin = std::min(tmin, tr);
    tmax = std::max(tmax, tr);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out.deviation = std::max(
            out.deviation, std::abs(phi.phi(pt, 0, i, j) - (i == j ? tr : 0.0)));
  }
  out.trace_variation = tmax - tmin;
  return out;
}

/// Sampled independence certificate: within each block, assign every chart
/// axis whose coordinate vector overlaps the block's eigenspace, then check
/// that the induced metric restricted to those axes does not change when
/// only transverse coordinates move.
inline double block_metric_independence(const SpectralField& sp, const BlockStructure& bs,
                                        unsigned seed = 42, int samples = 64) {
  const FrameField& F = sp.frame_field();
  const Grid& grid = F.grid();
  const int n = F.n();
  if (bs.count() < 2) return 0.0;

  // Axis-to-block assignment by eigenvector overlap at a reference point.
  long ref = grid.size() / 2;
  std::vector<int> axis_block(static_cast<size_t>(n), -1);
  for (int m = 0; m < n; ++m) {
    double best = -1.0;
    for (int b = 0; b < bs.count(); ++b) {
      const EigenBlock& blk = bs.blocks[size_t(b)];
      double ov = 0.0;
      for (int i = blk.start; i < blk.start + blk.multiplicity; ++i) {
        double comp = 0.0;
        for (int k = 0; k < n; ++k) comp += sp.evec(ref, i, k) * F.coframe(ref, k, m);
        ov += comp * comp;
      }
      if (ov > best) {
        best = ov;
        axis_block[size_t(m)] = b;
      }
    }
  }
  std::mt19937 rng(seed);
  double res = 0.0;
  for (int s = 0; s < samples; ++s) {
    std::array<int, kMaxChartDim> c1{}, c2{};
    for (int k = 0; k < n; ++k)
      c1[size_t(k)] = std::uniform_int_distribution<int>(0, grid.res(k) - 1)(rng);
    for (int b = 0; b < bs.count(); ++b) {
      // Second point: same block-b coordinates, random transverse ones.
      c2 = c1;
      for (int k = 0; k < n; ++k)
        if (axis_block[size_t(k)] != b)
          c2[size_t(k)] = std::uniform_int_distribution<int>(0, grid.res(k) - 1)(rng);
      long p1 = grid.index(c1), p2 = grid.index(c2);
      for (int a = 0; a < n; ++a) {
        if (axis_block[size_t(a)] != b) continue;
        for (int a2 = 0; a2 < n; ++a2) {
          if (axis_block[size_t(a2)] != b) continue;
          res = std::max(res, std::abs(F.metric(p1, a, a2) - F.metric(p2, a, a2)));
        }
      }
    }
  }
  return res;
}

enum class DecompositionVerdict { Decomposes, HypothesesFail, NonConstantSpectrum };

struct DecompositionReport {
  // Gates
  bool closed_chart = false;
  double min_sectional = 0.0;        // gate: >= -curvature_tol
  ParallelismResidual parallelism;
  bool gates_pass = false;
  std::string failed_gate;
  // Evidence
  TheoremIntegrals integrals;
  BlockStructure blocks;
  double cross_block = 0.0;
  double metric_independence = 0.0;
  DecompositionVerdict verdict = DecompositionVerdict::HypothesesFail;

  const char* verdict_string() const {
    switch (verdict) {
      case DecompositionVerdict::Decomposes: return "decomposes";
      case DecompositionVerdict::NonConstantSpectrum: return "non-constant spectrum";
      default: return "hypotheses fail";
    }
  }
};

struct DecompositionTolerances {
  double curvature = 1e-8;   // gate: min sampled R^i_jij >= -curvature
  double parallel = 1e-6;    // gate on both parallelism residuals
  double cluster = 1e-4;     // eigenvalue constancy / separation
  double residual = 1e-6;    // cross-block and metric-independence bound
};

/// Assemble the full product-decomposition certificate for the first tensor
/// slot of `phi` (gates, integrals, clusters, residuals, verdict).
inline DecompositionReport decomposition_report(const TensorBundle& phi,
                                                const SpectralField& sp,
                                                const CurvatureField& R, int fd_order,
                                                const DecompositionTolerances& tol) {
  const FrameField& F = phi.frame_field();
  DecompositionReport rep;
  rep.closed_chart = F.grid().domain().fully_periodic();
  rep.min_sectional = min_frame_sectional(R, F);
  rep.parallelism = parallelism_residual(F, fd_order);
  rep.blocks = cluster_eigenvalues(sp, tol.cluster);

  if (rep.min_sectional < -tol.curvature)
    rep.failed_gate = "curvature";
  else if (rep.parallelism.dphibar > tol.parallel ||
           rep.parallelism.normal_conn > tol.parallel)
    rep.failed_gate = "parallelism";
  else if (!rep.closed_chart)
    rep.failed_gate = "closed chart";
  rep.gates_pass = rep.failed_gate.empty();
  if (!rep.gates_pass) {
    rep.verdict = DecompositionVerdict::HypothesesFail;
    return rep;
  }
  rep.integrals = theorem_integrals(phi, sp, R);
  if (!rep.blocks.constant) {
    rep.verdict = DecompositionVerdict::NonConstantSpectrum;
    return rep;
  }
  rep.cross_block = cross_block_connection_residual(sp, rep.blocks, fd_order);
  rep.metric_independence = block_metric_independence(sp, rep.blocks);
  bool ok = rep.cross_block <= tol.residual &&
            rep.metric_independence <= std::max(tol.residual, 1e-10) &&
            rep.integrals.grad_integral <= tol.residual &&
            rep.integrals.curv_integral <= tol.residual;
  rep.verdict =
      ok ? DecompositionVerdict::Decomposes : DecompositionVerdict::HypothesesFail;
  return rep;
}

}  // namespace codazzi
