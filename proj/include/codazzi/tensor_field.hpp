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

#include <random>

#include "codazzi/fundforms.hpp"

namespace codazzi {

/// Families of normal-bundle-valued (or, in intrinsic mode, tangential)
/// symmetric 2-tensors the verifier can differentiate.
enum class PhiKind {
  SecondFundamental,        // phi^a_ij = h^a_ij
  ScaledSecondFundamental,  // s * h
  HessianPotential,         // intrinsic: Hess f + K f Id on constant-curvature bases
  RandomSymmetric,          // fixed-seed trigonometric polynomial (negative control)
  MetricTensor,             // intrinsic: delta_ij
};

struct RandomMode {
  double amp = 0.0;
  std::array<int, kMaxChartDim> k{};
  double phase = 0.0;
};

struct PhiSpec {
  PhiKind kind = PhiKind::SecondFundamental;
  double scale = 1.0;            // ScaledSecondFundamental
  ExprPtr potential;             // HessianPotential: f(u1.., x1..)
  double base_curvature = 0.0;   // HessianPotential: constant K of the base
  unsigned seed = 42;            // RandomSymmetric
  // RandomSymmetric coefficient table, filled by finalize(): one mode list
  // per independent component (alpha, i <= j).
  std::vector<std::vector<RandomMode>> modes;

  bool intrinsic() const {
    return kind == PhiKind::HessianPotential || kind == PhiKind::MetricTensor ||
           kind == PhiKind::RandomSymmetric;
  }
  /// Number of "normal" slots the component array carries.
  int slots(int p) const { return intrinsic() ? 1 : p; }

  /// Freeze the random coefficient table so every later evaluation (any
  /// scalar type, any grid) reads the same tensor.
  void finalize(int n) {
    if (kind != PhiKind::RandomSymmetric || !modes.empty()) return;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::uniform_int_distribution<int> wave(-2, 2);
    std::uniform_real_distribution<double> ph(0.0, 2 * M_PI);
    int ncomp = n * (n + 1) / 2;
    modes.resize(static_cast<size_t>(ncomp));
    for (auto& ms : modes) {
      ms.resize(3);
      for (auto& m : ms) {
        m.amp = amp(rng);
        for (int k = 0; k < n; ++k) m.k[static_cast<size_t>(k)] = wave(rng);
        m.phase = ph(rng);
      }
    }
  }
};

/// Pointwise tensor components phi[alpha][i][j] over an arbitrary scalar
/// type, so the same definition feeds grid sampling, dual-mode derivatives,
/// and finite-difference oracles.
template <class T>
struct PhiPoint {
  int slots = 0, n = 0;
  std::array<std::array<std::array<T, kMaxChartDim>, kMaxChartDim>, kMaxFrameDim> c{};
  T operator()(int a, int i, int j) const { return c[a][i][j]; }
};

namespace detail {

template <class T>
T scalar_value(const ImmersionSpec& imm, const Expr& f, const VecT<T>& u) {
  VecT<T> X = immersion_point(imm, u);
  ExprEnv<T> env;
  env.u = &u;
  env.x = &X;
  env.params = &imm.params;
  return eval_expr(f, env);
}

/// Value and frame-direction gradient e_k(f) of a scalar potential at u,
/// using one dual level for the chart partials.
template <class T>
void scalar_frame_grad(const FrameContext& ctx, const Expr& f, const VecT<T>& u,
                       const FramePoint<T>& fr, T& val, std::array<T, kMaxChartDim>& grad) {
  const int n = ctx.n();
  val = scalar_value(ctx.imm, f, u);
  std::array<T, kMaxChartDim> du{};
  for (int m = 0; m < n; ++m) {
    VecT<Dual<T>> ud(n);
    for (int k = 0; k < n; ++k) ud[k] = Dual<T>(u[k], T(k == m ? 1.0 : 0.0));
    du[m] = scalar_value(ctx.imm, f, ud).d;
  }
  for (int k = 0; k < n; ++k) {
    grad[k] = T{};
    for (int m = 0; m < n; ++m) grad[k] += fr.B(m, k) * du[m];
  }
}

/// Covariant Hessian f_{,ij} = e_i(e_j f) - sum_k Gamma^k_{j,i} e_k(f) in the
/// frame of gp.  One extra dual level differentiates the whole frame-gradient
/// map, keeping e_i(e_j f) exactly consistent with the frame field.
template <class T>
void covariant_hessian(const FrameContext& ctx, const Expr& f, const VecT<T>& u,
                       const GammaPoint<T>& gp,
                       std::array<std::array<T, kMaxChartDim>, kMaxChartDim>& hess) {
  const int n = ctx.n();
  T val;
  std::array<T, kMaxChartDim> grad{};
  scalar_frame_grad(ctx, f, u, gp.fr, val, grad);
  // d_m (e_j f) via duals through the frame map itself.
  std::array<std::array<T, kMaxChartDim>, kMaxChartDim> dgrad{};  // [m][j]
  for (int m = 0; m < n; ++m) {
    VecT<Dual<T>> ud(n);
    for (int k = 0; k < n; ++k) ud[k] = Dual<T>(u[k], T(k == m ? 1.0 : 0.0));
    FramePoint<Dual<T>> frd = frame_at<Dual<T>>(ctx, ud, /*with_adapt=*/false);
    Dual<T> vald;
    std::array<Dual<T>, kMaxChartDim> gradd{};
    scalar_frame_grad(ctx, f, ud, frd, vald, gradd);
    for (int j = 0; j < n; ++j) dgrad[m][j] = gradd[j].d;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      T v{};
      for (int m = 0; m < n; ++m) v += gp.fr.B(m, i) * dgrad[m][j];
      for (int k = 0; k < n; ++k) v -= gp.gamma[k][j][i] * grad[k];
      hess[i][j] = v;
    }
}

}  // namespace detail

/// Evaluate the tensor at a point.  `gp` must come from the same context (it
/// supplies h, the frame, and the connection for the Hessian correction).
template <class T>
PhiPoint<T> phi_at(const PhiSpec& spec, const FrameContext& ctx, const VecT<T>& u,
                   const GammaPoint<T>& gp) {
  const int n = ctx.n(), p = ctx.p();
  PhiPoint<T> out;
  out.n = n;
  out.slots = spec.slots(p);
  switch (spec.kind) {
    case PhiKind::SecondFundamental:
    case PhiKind::ScaledSecondFundamental: {
      double s = spec.kind == PhiKind::SecondFundamental ? 1.0 : spec.scale;
      for (int a = 0; a < p; ++a)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) out.c[a][i][j] = s * gp.h(a, i, j);
      break;
    }
    case PhiKind::MetricTensor: {
      for (int i = 0; i < n; ++i) out.c[0][i][i] = T(1.0);
      break;
    }
    case PhiKind::HessianPotential: {
      if (!spec.potential) throw ConfigError("phi: hessian kind needs a potential");
      std::array<std::array<T, kMaxChartDim>, kMaxChartDim> hess{};
      detail::covariant_hessian(ctx, *spec.potential, u, gp, hess);
      T fval = detail::scalar_value(ctx.imm, *spec.potential, u);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          out.c[0][i][j] = hess[i][j];
          if (i == j) out.c[0][i][j] += spec.base_curvature * fval;
        }
      break;
    }
    case PhiKind::RandomSymmetric: {
      if (spec.modes.empty()) throw ConfigError("phi: random spec not finalized");
      int idx = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j, ++idx) {
          T v{};
          for (const RandomMode& m : spec.modes[static_cast<size_t>(idx)]) {
            T arg = T(m.phase);
            for (int k = 0; k < n; ++k) arg += double(m.k[static_cast<size_t>(k)]) * u[k];
            v += m.amp * sin(arg);
          }
          out.c[0][i][j] = v;
          out.c[0][j][i] = v;
        }
      break;
    }
  }
  return out;
}

/// Grid-sampled tensor plus first and second covariant derivatives.
/// First derivatives come either from pointwise dual differentiation (exact,
/// mode "dual") or from finite differences of the sampled components (mode
/// "fd"); second derivatives always use finite differences of the first.
class TensorBundle {
public:
  enum class Mode { Dual, FiniteDifference };

  TensorBundle(const FrameField& F, PhiSpec spec, Mode mode, int fd_order)
      : F_(F), spec_(std::move(spec)), mode_(mode), fd_order_(fd_order) {
    spec_.finalize(F.n());
    const Grid& grid = F.grid();
    const int n = F.n();
    const long N = grid.size();
    slots_ = spec_.slots(F.p());
    phi_ = Field(N, slots_ * n * n);
    dphi_ = Field(N, slots_ * n * n * n);

    const FrameContext& ctx = F.context();
    parallel_for(N, [&](long pt) {
      Vec u = grid.point(pt);
      GammaPoint<double> gp = gamma_at<double>(ctx, u, ctx.gauge.adapt_normal);
      PhiPoint<double> pp = phi_at(spec_, ctx, u, gp);
      for (int a = 0; a < slots_; ++a)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) phi_.at(pt, (a * n + i) * n + j) = pp(a, i, j);
      if (mode_ == Mode::Dual) fill_dual_derivative(pt, u, gp);
    });
    if (mode_ == Mode::FiniteDifference) fill_fd_derivative();
    fill_second_derivative();
  }

  const FrameField& frame_field() const { return F_; }
  const PhiSpec& spec() const { return spec_; }
  int slots() const { return slots_; }
  bool intrinsic() const { return spec_.intrinsic(); }
  int margin() const {
    // First derivatives burn one stencil halo in fd mode; the second
    // derivative always burns one more.
    return mode_ == Mode::Dual ? fd_margin(fd_order_) : 2 * fd_margin(fd_order_);
  }

  double phi(long pt, int a, int i, int j) const {
    const int n = F_.n();
    return phi_.at(pt, (a * n + i) * n + j);
  }
  /// phi^a_{ij,k}
  double dphi(long pt, int a, int i, int j, int k) const {
    const int n = F_.n();
    return dphi_.at(pt, ((a * n + i) * n + j) * n + k);
  }
  /// phi^a_{ij,kl}
  double ddphi(long pt, int a, int i, int j, int k, int l) const {
    const int n = F_.n();
    return ddphi_.at(pt, (((a * n + i) * n + j) * n + k) * n + l);
  }

  /// max |phi^a_{ij,k} - phi^a_{ik,j}| over interior points.
  double codazzi_residual() const {
    const int n = F_.n();
    double r = 0.0;
    for (long pt = 0; pt < F_.grid().size(); ++pt) {
      if (!F_.grid().interior(pt, margin())) continue;
      for (int a = 0; a < slots_; ++a)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
              r = std::max(r, std::abs(dphi(pt, a, i, j, k) - dphi(pt, a, i, k, j)));
    }
    return r;
  }

  /// max of the ambient-corrected Codazzi residual for extrinsic phi:
  /// phi^a_{ij,k} - phi^a_{ik,j} minus the ambient curvature term, which
  /// vanishes identically in a space form.
  double max_dphi() const {
    const int n = F_.n();
    double r = 0.0;
    for (long pt = 0; pt < F_.grid().size(); ++pt) {
      if (!F_.grid().interior(pt, margin())) continue;
      for (int a = 0; a < slots_; ++a)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) r = std::max(r, std::abs(dphi(pt, a, i, j, k)));
    }
    return r;
  }

  /// Commutation-rule residual: phi^a_{ij,kl} - phi^a_{ij,lk} against the
  /// curvature right-hand side assembled from R and perpR.
  double commutator_residual(const CurvatureField& R) const {
    const int n = F_.n();
    const int marg = margin() + fd_margin(fd_order_);
    double r = 0.0;
    for (long pt = 0; pt < F_.grid().size(); ++pt) {
      if (!F_.grid().interior(pt, marg)) continue;
      for (int a = 0; a < slots_; ++a)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
              for (int l = 0; l < n; ++l) {
                double lhs = ddphi(pt, a, i, j, k, l) - ddphi(pt, a, i, j, l, k);
                double rhs = 0.0;
                if (!intrinsic())
                  for (int b = 0; b < slots_; ++b)
                    rhs += phi(pt, b, i, j) * R.perpR(pt, a, b, l, k);
                for (int m = 0; m < n; ++m)
                  rhs -= phi(pt, a, m, j) * R.R(pt, m, i, l, k) +
                         phi(pt, a, i, m) * R.R(pt, m, j, l, k);
                r = std::max(r, std::abs(lhs - rhs));
              }
    }
    return r;
  }

private:
  // Connection-corrected derivative given component derivatives e_k(phi_ij).
  double correct(long pt, int a, int i, int j, int k, double ek_phi) const {
    const int n = F_.n();
    double v = ek_phi;
    for (int m = 0; m < n; ++m)
      v -= phi(pt, a, m, j) * F_.gamma(pt, m, i, k) +
           phi(pt, a, i, m) * F_.gamma(pt, m, j, k);
    if (!intrinsic())
      for (int b = 0; b < slots_; ++b)
        v += phi(pt, b, i, j) * F_.gamma(pt, F_.n() + a, F_.n() + b, k);
    return v;
  }

  void fill_dual_derivative(long pt, const Vec& u, const GammaPoint<double>& gp) {
    const FrameContext& ctx = F_.context();
    const int n = F_.n();
    if (ctx.gauge.adapt_normal)
      throw ConfigError(
          "phi: dual-mode derivatives need a frozen normal gauge; "
          "use finite-difference mode with an adapted frame");
    // Chart partials of every component via one dual level, then frame
    // conversion and connection correction.
    std::array<PhiPoint<double>, kMaxChartDim> dp;
    for (int m = 0; m < n; ++m) {
      VecT<Dual<double>> ud(n);
      for (int k = 0; k < n; ++k) ud[k] = Dual<double>(u[k], k == m ? 1.0 : 0.0);
      GammaPoint<Dual<double>> gpd =
          gamma_at<Dual<double>>(ctx, ud, ctx.gauge.adapt_normal);
      PhiPoint<Dual<double>> ppd = phi_at(spec_, ctx, ud, gpd);
      for (int a = 0; a < slots_; ++a)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) dp[m].c[a][i][j] = ppd(a, i, j).d;
    }
    for (int a = 0; a < slots_; ++a)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            double ek = 0.0;
            for (int m = 0; m < n; ++m) ek += gp.fr.B(m, k) * dp[m].c[a][i][j];
            dphi_.at(pt, ((a * n + i) * n + j) * n + k) = correct(pt, a, i, j, k, ek);
          }
  }

  void fill_fd_derivative() {
    const int n = F_.n();
    for (int k = 0; k < n; ++k) {
      Field ek = F_.frame_derivative(phi_, k, fd_order_);
      for (long pt = 0; pt < F_.grid().size(); ++pt)
        for (int a = 0; a < slots_; ++a)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              dphi_.at(pt, ((a * n + i) * n + j) * n + k) =
                  correct(pt, a, i, j, k, ek.at(pt, (a * n + i) * n + j));
    }
  }

  void fill_second_derivative() {
    const int n = F_.n();
    const long N = F_.grid().size();
    ddphi_ = Field(N, slots_ * n * n * n * n);
    for (int l = 0; l < n; ++l) {
      Field el = F_.frame_derivative(dphi_, l, fd_order_);
      for (long pt = 0; pt < N; ++pt)
        for (int a = 0; a < slots_; ++a)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              for (int k = 0; k < n; ++k) {
                double v = el.at(pt, ((a * n + i) * n + j) * n + k);
                for (int m = 0; m < n; ++m)
                  v -= dphi(pt, a, m, j, k) * F_.gamma(pt, m, i, l) +
                       dphi(pt, a, i, m, k) * F_.gamma(pt, m, j, l) +
                       dphi(pt, a, i, j, m) * F_.gamma(pt, m, k, l);
                if (!intrinsic())
                  for (int b = 0; b < slots_; ++b)
                    v += dphi(pt, b, i, j, k) * F_.gamma(pt, n + a, n + b, l);
                ddphi_.at(pt, (((a * n + i) * n + j) * n + k) * n + l) = v;
              }
    }
  }

  const FrameField& F_;
  PhiSpec spec_;
  Mode mode_;
  int fd_order_;
  int slots_ = 0;
  Field phi_, dphi_, ddphi_;
};

}  // namespace codazzi
