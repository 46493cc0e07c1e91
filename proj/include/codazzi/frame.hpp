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

#include "codazzi/immersion.hpp"
#include "codazzi/jet.hpp"

namespace codazzi {

/// Optional frame gauges.  The tangent rotation field (angle expressions in
/// u1..un) backs the frame-covariance self-tests; the normal adaptation
/// rotates e_{n+1} onto the generalized mean curvature direction.
struct Gauge {
  std::vector<ExprPtr> tangent_angles;  // 1 angle for n=2, 3 plane angles for n=3
  bool adapt_normal = false;
};

/// Everything needed to evaluate the adapted frame as a smooth function of
/// the chart point: the immersion, the gauge, and the normal-completion
/// candidate selection frozen at a base point.  The same selection is reused
/// at every grid point and inside every dual-number differentiation, so the
/// frame field is one smooth function of the jet rather than a per-point
/// orthogonal completion with continuation seams.
struct FrameContext {
  ImmersionSpec imm;
  Gauge gauge;
  std::vector<int> normal_selection;  // candidate ids, one per normal vector
  int adapt_seed = 0;                 // old normal completing the adapted pair (p == 2)
  double rank_tol = 1e-10;
  double model_tol = 1e-11;
  double candidate_tol = 1e-3;

  int n() const { return imm.chart_dim(); }
  int p() const { return imm.codim(); }
  int embed() const { return imm.target.embedding_dim; }
};

template <class T>
struct FramePoint {
  VecT<T> X;
  std::array<VecT<T>, kMaxChartDim> dX;
  std::array<std::array<VecT<T>, kMaxChartDim>, kMaxChartDim> ddX;
  std::array<VecT<T>, kMaxFrameDim> E;  // e_1..e_n tangent, then normals
  MatT<T> A;  // A(k,m) = <d_m X, e_k>: chart coframe components
  MatT<T> B;  // e_k = sum_m B(m,k) d_m
};

template <class T>
struct GammaPoint {
  FramePoint<T> fr;
  int n = 0;  // tangent dimension, set by gamma_at
  // gamma[A][B][k] = omega^A_B(e_k) = <D_{e_k} e_B, e_A>
  std::array<std::array<std::array<T, kMaxChartDim>, kMaxFrameDim>, kMaxFrameDim> gamma{};

  // Second fundamental form h^alpha_ij = omega^{n+alpha}_i(e_j).
  T h(int alpha, int i, int j) const { return gamma[n + alpha][i][j]; }
};

template <class T>
GammaPoint<T> gamma_at(const FrameContext& ctx, const VecT<T>& u, bool with_adapt);

namespace detail {

// Order-2 jet of the immersion over an arbitrary scalar, via one nested-dual
// pass per direction pair.
template <class T>
void fill_jet2(const ImmersionSpec& imm, const VecT<T>& u, FramePoint<T>& fp) {
  using D2 = Dual<Dual<T>>;
  const int n = imm.chart_dim();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      VecT<D2> ud(n);
      for (int k = 0; k < n; ++k) {
        ud[k].v = Dual<T>(u[k], T(k == i ? 1.0 : 0.0));
        ud[k].d = Dual<T>(T(k == j ? 1.0 : 0.0), T(0.0));
      }
      VecT<D2> X = immersion_point(imm, ud);
      const int m = X.n;
      if (i == 0 && j == 0) {
        fp.X = VecT<T>(m);
        for (int c = 0; c < m; ++c) fp.X[c] = X[c].v.v;
        for (int k = 0; k < n; ++k) fp.dX[k] = VecT<T>(m);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) fp.ddX[a][b] = VecT<T>(m);
      }
      for (int c = 0; c < m; ++c) {
        fp.dX[i][c] = X[c].v.d;
        fp.dX[j][c] = X[c].d.v;
        fp.ddX[i][j][c] = X[c].d.d;
        fp.ddX[j][i][c] = X[c].d.d;
      }
    }
}

// Normal-completion candidates: model-projected second-derivative vectors
// (pair order (0,0), (0,1), ..., lexicographic i <= j), then model-projected
// embedding basis vectors.  Second derivatives come first because their
// normal projections are exactly second-fundamental-form directions, which
// vary smoothly and stay normal-valued wherever they are nonzero.
template <class T>
VecT<T> normal_candidate(const SpaceForm& sf, const FramePoint<T>& fp, int n, int id) {
  const int npairs = n * (n + 1) / 2;
  if (id < npairs) {
    int c = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j, ++c)
        if (c == id) return sf.project(fp.X, fp.ddX[i][j]);
  }
  int basis = id - npairs;
  VecT<T> w(fp.X.n);
  if (basis < 0 || basis >= w.n) throw ConfigError("normal candidate id out of range");
  w[basis] = T(1.0);
  return sf.project(fp.X, w);
}

template <class T>
MatT<T> tangent_rotation(const Gauge& gauge, const ParamMap& params, const VecT<T>& u, int n) {
  MatT<T> R(n, n);
  for (int i = 0; i < n; ++i) R(i, i) = T(1.0);
  if (gauge.tangent_angles.empty()) return R;
  ExprEnv<T> env;
  env.u = &u;
  env.params = &params;
  static const int planes[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  const int nang = static_cast<int>(gauge.tangent_angles.size());
  for (int a = 0; a < nang; ++a) {
    int pi = planes[a][0], pj = planes[a][1];
    if (pj >= n) throw ConfigError("too many tangent gauge angles for chart dimension");
    T th = eval_expr(*gauge.tangent_angles[a], env);
    T c = cos(th), s = sin(th);
    for (int col = 0; col < n; ++col) {
      T ri = R(pi, col), rj = R(pj, col);
      R(pi, col) = c * ri - s * rj;
      R(pj, col) = s * ri + c * rj;
    }
  }
  return R;
}

}  // namespace detail

/// Adapted orthonormal frame at a chart point.  Tangent frame by
/// Gram-Schmidt on the coordinate derivatives, normal frame by Gram-Schmidt
/// on the frozen candidate selection, optional gauges on top.  Templated on
/// the scalar so the construction can be differentiated exactly by seeding
/// dual numbers in `u`.
template <class T>
FramePoint<T> frame_at(const FrameContext& ctx, const VecT<T>& u, bool with_adapt) {
  const SpaceForm& sf = ctx.imm.target;
  const int n = ctx.n(), p = ctx.p();
  FramePoint<T> fp;
  detail::fill_jet2(ctx.imm, u, fp);

  if (sf.quadric()) {
    double cres = std::abs(primal(sf.dot(fp.X, fp.X)) - sf.quadric_constant());
    if (cres > ctx.model_tol)
      throw GeometryError("frame", "model constraint violated (|<X,X> - 1/c| = " +
                                       std::to_string(cres) + ")");
  }

  // Tangent frame.
  for (int k = 0; k < n; ++k) {
    VecT<T> t = sf.project(fp.X, fp.dX[k]);
    for (int l = 0; l < k; ++l) t -= sf.dot(t, fp.E[l]) * fp.E[l];
    T r2 = sf.dot(t, t);
    if (primal(r2) < ctx.rank_tol)
      throw GeometryError("frame", "degenerate immersion point (rank-deficient differential)");
    fp.E[k] = t * (1.0 / sqrt(r2));
  }

  // Normal frame from the frozen candidate selection.
  if (static_cast<int>(ctx.normal_selection.size()) != p)
    throw GeometryError("frame", "normal selection not initialized");
  for (int a = 0; a < p; ++a) {
    VecT<T> w = detail::normal_candidate(sf, fp, n, ctx.normal_selection[a]);
    double scale = std::max(1.0, std::sqrt(std::abs(primal(sf.dot(w, w)))));
    for (int l = 0; l < n + a; ++l) w -= sf.dot(w, fp.E[l]) * fp.E[l];
    T r2 = sf.dot(w, w);
    if (primal(r2) < ctx.candidate_tol * ctx.candidate_tol * scale * scale)
      throw GeometryError("frame", "frame discontinuity (normal candidate degenerated)");
    fp.E[n + a] = w * (1.0 / sqrt(r2));
  }

  // Tangent gauge rotation (frame-covariance self-tests).
  if (!ctx.gauge.tangent_angles.empty()) {
    MatT<T> R = detail::tangent_rotation(ctx.gauge, ctx.imm.params, u, n);
    std::array<VecT<T>, kMaxChartDim> rotated;
    for (int i = 0; i < n; ++i) {
      rotated[i] = VecT<T>(fp.X.n);
      for (int j = 0; j < n; ++j) rotated[i] += R(j, i) * fp.E[j];
    }
    for (int i = 0; i < n; ++i) fp.E[i] = rotated[i];
  }

  // Mean-curvature adaptation of the normal frame (p >= 2).  Needs the
  // unadapted connection at the same point, obtained recursively.
  // With the if-constexpr cap, one level of dual differentiation through the
  // adapted frame is available; deeper requests fall back to a runtime error
  // instead of an unbounded template recursion.
  if (with_adapt && ctx.gauge.adapt_normal && p >= 2) {
    if constexpr (dual_depth_v<T> > 1) {
      throw GeometryError("frame", "adapted frame differentiation nests too deep");
    } else {
    if (p > 2) throw ConfigError("normal adaptation supports codimension <= 2");
    GammaPoint<T> g0 = gamma_at<T>(ctx, u, /*with_adapt=*/false);
    VecT<T> Phi(fp.X.n);
    for (int a = 0; a < p; ++a) {
      T tr{};
      for (int i = 0; i < n; ++i) tr += g0.h(a, i, i);
      Phi += (tr * (1.0 / n)) * g0.fr.E[n + a];
    }
    T pn2 = sf.dot(Phi, Phi);
    if (primal(pn2) < 1e-24)
      throw GeometryError("spectral", "mean curvature vector vanishes, no adapted direction");
    VecT<T> e1 = Phi * (1.0 / sqrt(pn2));
    VecT<T> w = g0.fr.E[n + ctx.adapt_seed];
    w -= sf.dot(w, e1) * e1;
    T w2 = sf.dot(w, w);
    if (primal(w2) < 1e-12)
      throw GeometryError("spectral", "adapted normal completion degenerated");
    fp.E[n] = e1;
    fp.E[n + 1] = w * (1.0 / sqrt(w2));
    }
  }

  // Chart coframe components and the inverse change of basis.
  fp.A = MatT<T>(n, n);
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m) fp.A(k, m) = sf.dot(fp.dX[m], fp.E[k]);
  fp.B = MatT<T>(n, n);
  for (int k = 0; k < n; ++k) {
    VecT<T> rhs(n);
    rhs[k] = T(1.0);
    VecT<T> col = solve_small(fp.A, rhs, [](const T& x) { return primal(x); });
    for (int m = 0; m < n; ++m) fp.B(m, k) = col[m];
  }
  return fp;
}

/// Connection coefficients omega^A_B(e_k) at a chart point: the frame
/// construction is differentiated with dual numbers along each chart axis,
/// combined through B into frame directions, and projected onto the model
/// tangent space (the model connection is the flat derivative followed by
/// that projection).
template <class T>
GammaPoint<T> gamma_at(const FrameContext& ctx, const VecT<T>& u, bool with_adapt) {
  const SpaceForm& sf = ctx.imm.target;
  const int n = ctx.n(), np = ctx.n() + ctx.p();
  GammaPoint<T> gp;
  gp.fr = frame_at<T>(ctx, u, with_adapt);
  gp.n = n;

  // dE[m][A]: chart-partial of frame vector A along axis m.
  std::array<std::array<VecT<T>, kMaxFrameDim>, kMaxChartDim> dE;
  for (int m = 0; m < n; ++m) {
    VecT<Dual<T>> ud(n);
    for (int k = 0; k < n; ++k) ud[k] = Dual<T>(u[k], T(k == m ? 1.0 : 0.0));
    FramePoint<Dual<T>> fd = frame_at<Dual<T>>(ctx, ud, with_adapt);
    for (int A = 0; A < np; ++A) {
      dE[m][A] = VecT<T>(fd.E[A].n);
      for (int c = 0; c < fd.E[A].n; ++c) dE[m][A][c] = fd.E[A][c].d;
    }
  }
  for (int k = 0; k < n; ++k)
    for (int B = 0; B < np; ++B) {
      VecT<T> D(gp.fr.X.n);
      for (int m = 0; m < n; ++m) D += gp.fr.B(m, k) * dE[m][B];
      D = sf.project(gp.fr.X, D);
      for (int A = 0; A < np; ++A) gp.gamma[A][B][k] = sf.dot(D, gp.fr.E[A]);
    }
  return gp;
}

/// Freeze the normal-completion candidate selection at a base point: greedily
/// accept candidates whose projection onto the current orthogonal complement
/// keeps a safe margin.
inline void choose_normal_selection(FrameContext& ctx, const Vec& base_u) {
  const SpaceForm& sf = ctx.imm.target;
  const int n = ctx.n(), p = ctx.p();
  ctx.normal_selection.clear();

  FramePoint<double> fp;
  detail::fill_jet2(ctx.imm, base_u, fp);
  for (int k = 0; k < n; ++k) {
    Vec t = sf.project(fp.X, fp.dX[k]);
    for (int l = 0; l < k; ++l) t -= sf.dot(t, fp.E[l]) * fp.E[l];
    double r2 = sf.dot(t, t);
    if (r2 < ctx.rank_tol)
      throw GeometryError("frame", "degenerate immersion point at the base point");
    fp.E[k] = t * (1.0 / std::sqrt(r2));
  }

  const int ncand = n * (n + 1) / 2 + ctx.embed();
  int accepted = 0;
  for (int id = 0; id < ncand && accepted < p; ++id) {
    Vec w = detail::normal_candidate(sf, fp, n, id);
    double scale = std::max(1.0, std::sqrt(std::abs(sf.dot(w, w))));
    for (int l = 0; l < n + accepted; ++l) w -= sf.dot(w, fp.E[l]) * fp.E[l];
    double r2 = sf.dot(w, w);
    if (std::sqrt(std::abs(r2)) > 0.05 * scale) {
      fp.E[n + accepted] = w * (1.0 / std::sqrt(r2));
      ctx.normal_selection.push_back(id);
      ++accepted;
    }
  }
  if (accepted != p)
    throw GeometryError("frame", "could not complete a normal frame at the base point");
}

/// Pick the old normal that completes the adapted pair: the one least aligned
/// with the mean curvature direction at the base point (p == 2).
inline void choose_adapt_seed(FrameContext& ctx, const Vec& base_u) {
  if (ctx.p() < 2 || !ctx.gauge.adapt_normal) return;
  const SpaceForm& sf = ctx.imm.target;
  const int n = ctx.n(), p = ctx.p();
  GammaPoint<double> g0 = gamma_at<double>(ctx, base_u, false);
  Vec Phi(g0.fr.X.n);
  for (int a = 0; a < p; ++a) {
    double tr = 0;
    for (int i = 0; i < n; ++i) tr += g0.h(a, i, i);
    Phi += (tr / n) * g0.fr.E[n + a];
  }
  double pn = std::sqrt(std::abs(sf.dot(Phi, Phi)));
  if (pn < 1e-12)
    throw GeometryError("spectral", "mean curvature vector vanishes, no adapted direction");
  int best = 0;
  double best_align = 2.0;
  for (int a = 0; a < p; ++a) {
    double align = std::abs(sf.dot(Phi, g0.fr.E[n + a])) / pn;
    if (align < best_align) { best_align = align; best = a; }
  }
  ctx.adapt_seed = best;
}

}  // namespace codazzi
