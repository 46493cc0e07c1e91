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
#include <utility>
#include <vector>

#include "codazzi/frame_field.hpp"

namespace codazzi {

/// Tangential curvature field R[i][j][k][l] = <R(e_k,e_l)e_j, e_i>, computed
/// from the induced connection forms via finite-difference exterior
/// derivatives.  Stored flat with stride n^4; only interior points (relative
/// to the stencil margin) are meaningful on non-periodic axes.
class CurvatureField {
public:
  CurvatureField(const FrameField& F, int fd_order) : F_(F), fd_order_(fd_order) {
    const Grid& grid = F.grid();
    const int n = F.n(), np = F.frame_dim();
    const long N = grid.size();

    // omega^A_B(d_m) for the tangent and normal blocks.
    Field conn(N, np * np * n);
    for (long pt = 0; pt < N; ++pt)
      for (int A = 0; A < np; ++A)
        for (int B = 0; B < np; ++B)
          for (int m = 0; m < n; ++m) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += F.coframe(pt, k, m) * F.gamma(pt, A, B, k);
            conn.at(pt, (A * np + B) * n + m) = s;
          }
    std::array<Field, kMaxChartDim> dconn;
    for (int m = 0; m < n; ++m) dconn[m] = fd_derivative(grid, conn, m, fd_order);

    R_ = Field(N, n * n * n * n);
    const int pdim = F.p();
    perpR_ = Field(N, pdim * pdim * n * n);
    auto omega = [&](long pt, int A, int B, int m) {
      return conn.at(pt, (A * np + B) * n + m);
    };
    for (long pt = 0; pt < N; ++pt) {
      // Curvature 2-form of each block in chart components, then push to
      // frame indices through B(m,k).
      for (int A = 0; A < np; ++A)
        for (int B = 0; B < np; ++B) {
          const bool tangent_block = (A < n && B < n);
          const bool normal_block = (A >= n && B >= n);
          if (!tangent_block && !normal_block) continue;
          const int lo = tangent_block ? 0 : n;
          const int hi = tangent_block ? n : np;
          Mat om(n, n);  // Omega^A_B(d_m, d_l)
          for (int m = 0; m < n; ++m)
            for (int l = 0; l < n; ++l) {
              double v = dconn[m].at(pt, (A * np + B) * n + l) -
                         dconn[l].at(pt, (A * np + B) * n + m);
              for (int C = lo; C < hi; ++C)
                v += omega(pt, A, C, m) * omega(pt, C, B, l) -
                     omega(pt, A, C, l) * omega(pt, C, B, m);
              om(m, l) = v;
            }
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
              double v = 0.0;
              for (int m = 0; m < n; ++m)
                for (int l2 = 0; l2 < n; ++l2)
                  v += F.chart_comp(pt, m, k) * F.chart_comp(pt, l2, l) * om(m, l2);
              if (tangent_block)
                R_.at(pt, ((A * n + B) * n + k) * n + l) = v;
              else
                perpR_.at(pt, (((A - n) * pdim + (B - n)) * n + k) * n + l) = v;
            }
        }
    }
  }

  int margin() const { return fd_margin(fd_order_); }
  /// <R(e_k,e_l)e_j, e_i>
  double R(long pt, int i, int j, int k, int l) const {
    const int n = F_.n();
    return R_.at(pt, ((i * n + j) * n + k) * n + l);
  }
  /// Normal curvature <R_perp(e_j,e_k) e_beta, e_alpha> from the connection route.
  double perpR(long pt, int alpha, int beta, int j, int k) const {
    const int n = F_.n(), pd = F_.p();
    return perpR_.at(pt, ((alpha * pd + beta) * n + j) * n + k);
  }

  /// Gauss-equation value for the same component, built purely from the
  /// pointwise second fundamental form and the ambient constant.
  double gauss_rhs(long pt, int i, int j, int k, int l) const {
    const double c = F_.context().imm.target.c;
    double v = c * ((i == k && j == l ? 1.0 : 0.0) - (i == l && j == k ? 1.0 : 0.0));
    for (int a = 0; a < F_.p(); ++a)
      v += F_.h(pt, a, i, k) * F_.h(pt, a, j, l) - F_.h(pt, a, i, l) * F_.h(pt, a, j, k);
    return v;
  }

  /// Ricci-equation value: ambient term (zero between distinct normals in a
  /// space form) plus the shape-operator commutator.
  double ricci_rhs(long pt, int alpha, int beta, int j, int k) const {
    double v = 0.0;
    for (int i = 0; i < F_.n(); ++i)
      v += F_.h(pt, alpha, i, j) * F_.h(pt, beta, i, k) -
           F_.h(pt, alpha, i, k) * F_.h(pt, beta, i, j);
    return v;
  }

  double max_gauss_residual() const {
    const int n = F_.n();
    double r = 0.0;
    for (long pt = 0; pt < F_.grid().size(); ++pt) {
      if (!F_.grid().interior(pt, margin())) continue;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
              r = std::max(r, std::abs(R(pt, i, j, k, l) - gauss_rhs(pt, i, j, k, l)));
    }
    return r;
  }

  double max_ricci_residual() const {
    double r = 0.0;
    for (long pt = 0; pt < F_.grid().size(); ++pt) {
      if (!F_.grid().interior(pt, margin())) continue;
      for (int a = 0; a < F_.p(); ++a)
        for (int b = 0; b < F_.p(); ++b)
          for (int j = 0; j < F_.n(); ++j)
            for (int k = 0; k < F_.n(); ++k)
              r = std::max(r, std::abs(perpR(pt, a, b, j, k) - ricci_rhs(pt, a, b, j, k)));
    }
    return r;
  }

  /// Ricci tensor of the submanifold: Ric_ij = sum_k R(k, i, k, j).
  double ricci_tensor(long pt, int i, int j) const {
    double v = 0.0;
    for (int k = 0; k < F_.n(); ++k) v += R(pt, k, i, k, j);
    return v;
  }

  /// Residual of the contracted Gauss identity:
  /// Ric_ij = (n-1) c delta_ij + sum_alpha (n H^a h^a_ij - (h^a h^a)_ij)
  /// where H^alpha is the mean curvature component sum_k h^alpha_kk / n.
  double max_ricci_tensor_residual() const {
    const int n = F_.n();
    const double c = F_.context().imm.target.c;
    double r = 0.0;
    for (long pt = 0; pt < F_.grid().size(); ++pt) {
      if (!F_.grid().interior(pt, margin())) continue;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double rhs = (n - 1) * c * (i == j ? 1.0 : 0.0);
          for (int a = 0; a < F_.p(); ++a) {
            double tr = 0.0, hh = 0.0;
            for (int k = 0; k < n; ++k) {
              tr += F_.h(pt, a, k, k);
              hh += F_.h(pt, a, i, k) * F_.h(pt, a, k, j);
            }
            rhs += tr * F_.h(pt, a, i, j) - hh;
          }
          r = std::max(r, std::abs(ricci_tensor(pt, i, j) - rhs));
        }
    }
    return r;
  }

private:
  const FrameField& F_;
  int fd_order_;
  Field R_, perpR_;
};

/// Independent curvature oracle: coordinate Christoffel symbols of the induced
/// chart metric by finite differences, coordinate Riemann tensor, then the
/// frame transform.  Shares nothing with the connection-form route except the
/// sampled metric and frame.
inline double intrinsic_riemann_oracle(const FrameField& F, long pt, int i, int j, int k,
                                       int l, int fd_order) {
  const Grid& grid = F.grid();
  const int n = F.n();
  // g_{ab} and its first/second derivatives at pt from global FD fields would
  // be wasteful for a single point; instead use local stencils.
  auto gat = [&](long q, int a, int b) { return F.metric(q, a, b); };
  // Christoffel (first kind) Gamma_{c,ab} at an arbitrary grid point q:
  // 2 Gamma_{c,ab} = d_a g_{cb} + d_b g_{ca} - d_c g_{ab}.
  auto christoffel = [&](long q, int c, int a, int b) {
    auto dgq = [&](int m, int aa, int bb) {
      const double hstep = grid.step(m);
      auto s = [&](int off) { return gat(grid.shifted(q, m, off), aa, bb); };
      if (fd_order == 2) return (s(1) - s(-1)) / (2 * hstep);
      if (fd_order == 4) return (-s(2) + 8 * s(1) - 8 * s(-1) + s(-2)) / (12 * hstep);
      if (fd_order == 6)
        return (s(3) - s(-3) + 9 * (s(-2) - s(2)) + 45 * (s(1) - s(-1))) / (60 * hstep);
      return (3 * (s(-4) - s(4)) + 32 * (s(3) - s(-3)) + 168 * (s(-2) - s(2)) +
              672 * (s(1) - s(-1))) /
             (840 * hstep);
    };
    return 0.5 * (dgq(a, c, b) + dgq(b, c, a) - dgq(c, a, b));
  };
  // Gamma^c_{ab} at q.
  auto christoffel2 = [&](long q, int c, int a, int b) {
    double s = 0.0;
    for (int m = 0; m < n; ++m) s += F.metric_inv(q, c, m) * christoffel(q, m, a, b);
    return s;
  };
  // Coordinate Riemann R^a_{bcd} = d_c G^a_{db} - d_d G^a_{cb} + G^a_{cm}G^m_{db}
  //                                - G^a_{dm}G^m_{cb}, lowered to R_{abcd}.
  auto dG = [&](int m, int c, int a, int b) {
    const double hstep = grid.step(m);
    auto s = [&](int off) { return christoffel2(grid.shifted(pt, m, off), c, a, b); };
    if (fd_order == 2) return (s(1) - s(-1)) / (2 * hstep);
    if (fd_order == 4) return (-s(2) + 8 * s(1) - 8 * s(-1) + s(-2)) / (12 * hstep);
    if (fd_order == 6)
      return (s(3) - s(-3) + 9 * (s(-2) - s(2)) + 45 * (s(1) - s(-1))) / (60 * hstep);
    if (fd_order == 8)
      return (3 * (s(-4) - s(4)) + 32 * (s(3) - s(-3)) + 168 * (s(-2) - s(2)) +
              672 * (s(1) - s(-1))) /
             (840 * hstep);
    return (2 * (s(5) - s(-5)) + 25 * (s(-4) - s(4)) + 150 * (s(3) - s(-3)) +
            600 * (s(-2) - s(2)) + 2100 * (s(1) - s(-1))) /
           (2520 * hstep);
  };
  auto riem_up = [&](int a, int b, int c, int d) {
    double v = dG(c, a, d, b) - dG(d, a, c, b);
    for (int m = 0; m < n; ++m)
      v += christoffel2(pt, a, c, m) * christoffel2(pt, m, d, b) -
           christoffel2(pt, a, d, m) * christoffel2(pt, m, c, b);
    return v;
  };
  // Lowered coordinate tensor, then contract with frame chart components:
  // R(e_k, e_l, e_j, e_i) convention-matched to CurvatureField::R.
  double out = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int cix = 0; cix < n; ++cix)
        for (int dix = 0; dix < n; ++dix) {
          double low = 0.0;
          for (int m = 0; m < n; ++m) low += F.metric(pt, a, m) * riem_up(m, b, cix, dix);
          out += F.chart_comp(pt, a, i) * F.chart_comp(pt, b, j) *
                 F.chart_comp(pt, cix, k) * F.chart_comp(pt, dix, l) * low;
        }
  return out;
}

/// All frame components of the intrinsic oracle at one point in a single
/// pass, with the Christoffel evaluations memoized across the stencil.
/// Returns a flat [i][j][k][l] array of size n^4, same convention as
/// CurvatureField::R.
inline std::vector<double> intrinsic_riemann_oracle_all(const FrameField& F, long pt,
                                                        int fd_order) {
  const Grid& grid = F.grid();
  const int n = F.n();
  const int m1 = fd_margin(fd_order);

  auto stencil = [&](auto&& fn, int axis, double hstep) {
    auto s = [&](int off) { return fn(off); };
    (void)axis;
    if (fd_order == 2) return (s(1) - s(-1)) / (2 * hstep);
    if (fd_order == 4) return (-s(2) + 8 * s(1) - 8 * s(-1) + s(-2)) / (12 * hstep);
    if (fd_order == 6)
      return (s(3) - s(-3) + 9 * (s(-2) - s(2)) + 45 * (s(1) - s(-1))) / (60 * hstep);
    if (fd_order == 8)
      return (3 * (s(-4) - s(4)) + 32 * (s(3) - s(-3)) + 168 * (s(-2) - s(2)) +
              672 * (s(1) - s(-1))) /
             (840 * hstep);
    return (2 * (s(5) - s(-5)) + 25 * (s(-4) - s(4)) + 150 * (s(3) - s(-3)) +
            600 * (s(-2) - s(2)) + 2100 * (s(1) - s(-1))) /
           (2520 * hstep);
  };

  auto christoffel1 = [&](long q, int c, int a, int b) {
    auto dg = [&](int axis, int aa, int bb) {
      return stencil(
          [&](int off) { return F.metric(grid.shifted(q, axis, off), aa, bb); }, axis,
          grid.step(axis));
    };
    return 0.5 * (dg(a, c, b) + dg(b, c, a) - dg(c, a, b));
  };
  // Memoized Gamma^c_{ab} for every stencil point the dG pass touches.
  std::map<std::pair<long, int>, double> memo;
  auto christoffel2 = [&](long q, int c, int a, int b) {
    auto it = memo.find({q, (c * n + a) * n + b});
    if (it != memo.end()) return it->second;
    double s = 0.0;
    for (int m = 0; m < n; ++m) s += F.metric_inv(q, c, m) * christoffel1(q, m, a, b);
    memo.emplace(std::pair<long, int>{q, (c * n + a) * n + b}, s);
    return s;
  };
  auto dG = [&](int axis, int c, int a, int b) {
    return stencil(
        [&](int off) { return christoffel2(grid.shifted(pt, axis, off), c, a, b); }, axis,
        grid.step(axis));
  };
  auto riem_up = [&](int a, int b, int c, int d) {
    double v = dG(c, a, d, b) - dG(d, a, c, b);
    for (int m = 0; m < n; ++m)
      v += christoffel2(pt, a, c, m) * christoffel2(pt, m, d, b) -
           christoffel2(pt, a, d, m) * christoffel2(pt, m, c, b);
    return v;
  };
  (void)m1;

  // Lowered coordinate tensor once.
  std::vector<double> low(size_t(n) * n * n * n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double v = 0.0;
          for (int m = 0; m < n; ++m) v += F.metric(pt, a, m) * riem_up(m, b, c, d);
          low[size_t(((a * n + b) * n + c) * n + d)] = v;
        }
  // Frame contraction.
  std::vector<double> out(size_t(n) * n * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = 0.0;
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                  v += F.chart_comp(pt, a, i) * F.chart_comp(pt, b, j) *
                       F.chart_comp(pt, c, k) * F.chart_comp(pt, d, l) *
                       low[size_t(((a * n + b) * n + c) * n + d)];
          out[size_t(((i * n + j) * n + k) * n + l)] = v;
        }
  return out;
}

}  // namespace codazzi
