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

#include <Eigen/Dense>

#include "codazzi/tensor_field.hpp"

namespace codazzi {

struct MeanCurvatureData {
  Field Phi;        // components in the normal frame, p per point
  double min_mag = 0.0, max_mag = 0.0;
};

/// Generalized mean curvature vector Phi = (1/n) sum_a (tr h^a) e_a.
inline MeanCurvatureData mean_curvature_vector(const FrameField& F) {
  const int n = F.n(), p = F.p();
  const long N = F.grid().size();
  MeanCurvatureData out;
  out.Phi = Field(N, p);
  out.min_mag = std::numeric_limits<double>::infinity();
  for (long pt = 0; pt < N; ++pt) {
    double mag2 = 0.0;
    for (int a = 0; a < p; ++a) {
      double tr = 0.0;
      for (int i = 0; i < n; ++i) tr += F.h(pt, a, i, i);
      out.Phi.at(pt, a) = tr / n;
      mag2 += (tr / n) * (tr / n);
    }
    out.min_mag = std::min(out.min_mag, std::sqrt(mag2));
    out.max_mag = std::max(out.max_mag, std::sqrt(mag2));
  }
  return out;
}

struct ParallelismResidual {
  double dphibar = 0.0;      // max |e_k(phibar)| with phibar = (1/n) tr h^{first}
  double normal_conn = 0.0;  // max |Gamma^{n+1}_{beta,k}| over the other normals
};

/// Definition-level parallelism test in the frame the field was built with
/// (adapted when the gauge requested it; for hypersurfaces the second
/// residual is vacuously zero).
inline ParallelismResidual parallelism_residual(const FrameField& F, int fd_order) {
  const int n = F.n(), p = F.p();
  const long N = F.grid().size();
  Field phibar(N, 1);
  for (long pt = 0; pt < N; ++pt) {
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += F.h(pt, 0, i, i);
    phibar.at(pt, 0) = tr / n;
  }
  ParallelismResidual res;
  const int marg = fd_margin(fd_order);
  for (int k = 0; k < n; ++k) {
    Field d = F.frame_derivative(phibar, k, fd_order);
    res.dphibar = std::max(res.dphibar, max_abs(F.grid(), d, marg));
  }
  for (long pt = 0; pt < N; ++pt)
    for (int b = 1; b < p; ++b)
      for (int k = 0; k < n; ++k)
        res.normal_conn =
            std::max(res.normal_conn, std::abs(F.gamma(pt, n, n + b, k)));
  return res;
}

/// Pointwise symmetric eigendecomposition of one tensor slot (or a weighted
/// combination of slots), eigenvalues sorted descending, eigenvector signs
/// aligned with the previous grid point for continuity.
class SpectralField {
public:
  SpectralField(const TensorBundle& phi, const std::vector<double>& weights)
      : F_(phi.frame_field()) {
    const int n = F_.n();
    const long N = F_.grid().size();
    lambda_ = Field(N, n);
    evec_ = Field(N, n * n);
    gap_ = Field(N, 1);
    recon_residual_ = 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    Eigen::MatrixXd M(n, n);
    for (long pt = 0; pt < N; ++pt) {
      M.setZero();
      for (int a = 0; a < static_cast<int>(weights.size()); ++a)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) M(i, j) += weights[size_t(a)] * phi.phi(pt, a, i, j);
      es.compute(M);
      // Eigen sorts ascending; store descending.
      for (int i = 0; i < n; ++i) {
        lambda_.at(pt, i) = es.eigenvalues()(n - 1 - i);
        for (int k = 0; k < n; ++k) evec_.at(pt, i * n + k) = es.eigenvectors()(k, n - 1 - i);
      }
      double g = std::numeric_limits<double>::infinity();
      for (int i = 0; i + 1 < n; ++i)
        g = std::min(g, lambda_.at(pt, i) - lambda_.at(pt, i + 1));
      gap_.at(pt, 0) = g;
      // Sign continuity against the previous point along the last axis.
      if (pt > 0) {
        for (int i = 0; i < n; ++i) {
          double dot = 0.0;
          for (int k = 0; k < n; ++k) dot += evec_.at(pt, i * n + k) * evec_.at(pt - 1, i * n + k);
          if (dot < 0)
            for (int k = 0; k < n; ++k) evec_.at(pt, i * n + k) = -evec_.at(pt, i * n + k);
        }
      }
      // Reconstruction check of the decomposed matrix.
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double v = 0.0;
          for (int m = 0; m < n; ++m)
            v += lambda_.at(pt, m) * evec_.at(pt, m * n + i) * evec_.at(pt, m * n + j);
          recon_residual_ = std::max(recon_residual_, std::abs(v - M(i, j)));
        }
    }
  }

  const FrameField& frame_field() const { return F_; }
  double lambda(long pt, int i) const { return lambda_.at(pt, i); }
  /// Frame components of eigenvector i.
  double evec(long pt, int i, int k) const { return evec_.at(pt, i * F_.n() + k); }
  double gap(long pt) const { return gap_.at(pt, 0); }
  double reconstruction_residual() const { return recon_residual_; }

  /// max over the grid of |lambda_i - median_i| per index, and the largest
  /// such spread (constancy certificate input).
  std::vector<double> constancy_residuals() const {
    const int n = F_.n();
    const long N = F_.grid().size();
    std::vector<double> out(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
      std::vector<double> vals(static_cast<size_t>(N));
      for (long pt = 0; pt < N; ++pt) vals[static_cast<size_t>(pt)] = lambda_.at(pt, i);
      std::nth_element(vals.begin(), vals.begin() + N / 2, vals.end());
      double med = vals[static_cast<size_t>(N / 2)];
      for (long pt = 0; pt < N; ++pt)
        out[static_cast<size_t>(i)] =
            std::max(out[static_cast<size_t>(i)], std::abs(lambda_.at(pt, i) - med));
    }
    return out;
  }

  std::vector<double> median_eigenvalues() const {
    const int n = F_.n();
    const long N = F_.grid().size();
    std::vector<double> out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      std::vector<double> vals(static_cast<size_t>(N));
      for (long pt = 0; pt < N; ++pt) vals[static_cast<size_t>(pt)] = lambda_.at(pt, i);
      std::nth_element(vals.begin(), vals.begin() + N / 2, vals.end());
      out[static_cast<size_t>(i)] = vals[static_cast<size_t>(N / 2)];
    }
    return out;
  }

private:
  const FrameField& F_;
  Field lambda_, evec_, gap_;
  double recon_residual_ = 0.0;
};

/// Laplace-Beltrami of a scalar grid field, divergence form:
/// (1/sqrt g) d_m ( sqrt g g^{mn} d_n u ).
inline Field scalar_laplacian_divergence(const FrameField& F, const Field& u, int fd_order) {
  const Grid& grid = F.grid();
  const int n = F.n();
  const long N = grid.size();
  Field flux(N, n);
  std::array<Field, kMaxChartDim> du;
  for (int m = 0; m < n; ++m) du[m] = fd_derivative(grid, u, m, fd_order);
  for (long pt = 0; pt < N; ++pt)
    for (int m = 0; m < n; ++m) {
      double v = 0.0;
      for (int nn = 0; nn < n; ++nn) v += F.metric_inv(pt, m, nn) * du[nn].at(pt, 0);
      flux.at(pt, m) = F.sqrt_g(pt) * v;
    }
  Field out(N, 1);
  for (int m = 0; m < n; ++m) {
    Field comp(N, 1);
    for (long pt = 0; pt < N; ++pt) comp.at(pt, 0) = flux.at(pt, m);
    Field d = fd_derivative(grid, comp, m, fd_order);
    for (long pt = 0; pt < N; ++pt) out.at(pt, 0) += d.at(pt, 0);
  }
  for (long pt = 0; pt < N; ++pt) out.at(pt, 0) /= F.sqrt_g(pt);
  return out;
}

/// Laplace-Beltrami in frame form: sum_k u_{,kk} with the connection
/// correction; independent cross-check of the divergence form.
inline Field scalar_laplacian_frame(const FrameField& F, const Field& u, int fd_order) {
  const int n = F.n();
  const long N = F.grid().size();
  Field grad(N, n);
  for (int k = 0; k < n; ++k) {
    Field d = F.frame_derivative(u, k, fd_order);
    for (long pt = 0; pt < N; ++pt) grad.at(pt, k) = d.at(pt, 0);
  }
  Field out(N, 1);
  for (int k = 0; k < n; ++k) {
    Field dk = F.frame_derivative(grad, k, fd_order);
    for (long pt = 0; pt < N; ++pt) {
      double v = dk.at(pt, k);
      for (int m = 0; m < n; ++m) v -= F.gamma(pt, m, k, k) * grad.at(pt, m);
      out.at(pt, 0) += v;
    }
  }
  return out;
}

/// Identity residual for the parallel-mean-curvature case:
/// (1/2) Lap |phi|^2 = |grad phi|^2 + (1/2) sum_{i,j} R^i_jij (l_i - l_j)^2,
/// with phi the first tensor slot.
inline double simons_residual_parallel(const TensorBundle& phi, const SpectralField& sp,
                                       const CurvatureField& R, int fd_order) {
  const FrameField& F = phi.frame_field();
  const int n = F.n();
  const long N = F.grid().size();
  Field norm2(N, 1);
  for (long pt = 0; pt < N; ++pt) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += phi.phi(pt, 0, i, j) * phi.phi(pt, 0, i, j);
    norm2.at(pt, 0) = s;
  }
  Field lap = scalar_laplacian_divergence(F, norm2, fd_order);
  const int marg = phi.margin() + R.margin() + fd_margin(fd_order);
  double res = 0.0;
  for (long pt = 0; pt < N; ++pt) {
    if (!F.grid().interior(pt, marg)) continue;
    double dphi2 = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) dphi2 += phi.dphi(pt, 0, i, j, k) * phi.dphi(pt, 0, i, j, k);
    double curv = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double gapl = sp.lambda(pt, i) - sp.lambda(pt, j);
        curv += R.R(pt, i, j, i, j) * gapl * gapl;
      }
    res = std::max(res, std::abs(0.5 * lap.at(pt, 0) - dphi2 - 0.5 * curv));
  }
  return res;
}

/// Identity residual for the flat-normal-bundle case:
/// (1/2) Lap |phi|^2 = |grad phi|^2 + sum_{a,i} l^a_i (tr phi^a)_{,ii}
///                     + (1/2) sum_{a,i,j} R^i_jij (l^a_i - l^a_j)^2,
/// everything contracted in the common eigenframe `sp` (built from a generic
/// weighted combination of the slots, which diagonalizes all of them when the
/// normal bundle is flat).
inline double simons_residual_flat(const TensorBundle& phi, const SpectralField& sp,
                                   const CurvatureField& R, int fd_order) {
  const FrameField& F = phi.frame_field();
  const int n = F.n(), slots = phi.slots();
  const long N = F.grid().size();
  Field norm2(N, 1);
  Field traces(N, slots);
  for (long pt = 0; pt < N; ++pt) {
    double s = 0.0;
    for (int a = 0; a < slots; ++a) {
      double tr = 0.0;
      for (int i = 0; i < n; ++i) {
        tr += phi.phi(pt, a, i, i);
        for (int j = 0; j < n; ++j) s += phi.phi(pt, a, i, j) * phi.phi(pt, a, i, j);
      }
      traces.at(pt, a) = tr;
    }
    norm2.at(pt, 0) = s;
  }
  Field lap = scalar_laplacian_divergence(F, norm2, fd_order);

  // Covariant Hessian of each trace scalar in the base frame:
  // t_{,kl} = e_l(e_k t) - sum_m Gamma^m_{k,l} e_m t.
  Field grad(N, slots * n);
  for (int k = 0; k < n; ++k) {
    Field d = F.frame_derivative(traces, k, fd_order);
    for (long pt = 0; pt < N; ++pt)
      for (int a = 0; a < slots; ++a) grad.at(pt, a * n + k) = d.at(pt, a);
  }
  Field hess(N, slots * n * n);
  for (int l = 0; l < n; ++l) {
    Field d = F.frame_derivative(grad, l, fd_order);
    for (long pt = 0; pt < N; ++pt)
      for (int a = 0; a < slots; ++a)
        for (int k = 0; k < n; ++k) {
          double v = d.at(pt, a * n + k);
          for (int m = 0; m < n; ++m)
            v -= F.gamma(pt, m, k, l) * grad.at(pt, a * n + m);
          hess.at(pt, (a * n + k) * n + l) = v;
        }
  }

  const int marg = phi.margin() + R.margin() + 2 * fd_margin(fd_order);
  double res = 0.0;
  for (long pt = 0; pt < N; ++pt) {
    if (!F.grid().interior(pt, marg)) continue;
    double dphi2 = 0.0;
    for (int a = 0; a < slots; ++a)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            dphi2 += phi.dphi(pt, a, i, j, k) * phi.dphi(pt, a, i, j, k);
    double trace_term = 0.0, curv = 0.0;
    for (int a = 0; a < slots; ++a) {
      for (int i = 0; i < n; ++i) {
        // lambda^a_i = v_i^T phi^a v_i in the common eigenframe.
        double la = 0.0, hii = 0.0;
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            la += sp.evec(pt, i, k) * phi.phi(pt, a, k, l) * sp.evec(pt, i, l);
            hii += sp.evec(pt, i, k) * hess.at(pt, (a * n + k) * n + l) * sp.evec(pt, i, l);
          }
        trace_term += la * hii;
        for (int j = 0; j < n; ++j) {
          double lb = 0.0, Rij = 0.0;
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
              lb += sp.evec(pt, j, k) * phi.phi(pt, a, k, l) * sp.evec(pt, j, l);
              for (int k2 = 0; k2 < n; ++k2)
                for (int l2 = 0; l2 < n; ++l2)
                  Rij += sp.evec(pt, i, k) * sp.evec(pt, j, l) * sp.evec(pt, i, k2) *
                         sp.evec(pt, j, l2) * R.R(pt, k, l, k2, l2);
            }
          curv += Rij * (la - lb) * (la - lb);
        }
      }
    }
    res = std::max(res, std::abs(0.5 * lap.at(pt, 0) - dphi2 - trace_term - 0.5 * curv));
  }
  return res;
}

/// Integral of a scalar field over a fully periodic chart (exact-order
/// trapezoid = midpoint rule on the torus), weighted by sqrt(det g).
inline double integrate(const FrameField& F, const Field& f) {
  if (!F.grid().domain().fully_periodic())
    throw GeometryError("spectral", "not a closed chart");
  double s = 0.0;
  for (long pt = 0; pt < F.grid().size(); ++pt) s += f.at(pt, 0) * F.sqrt_g(pt);
  return s * F.grid().cell_volume();
}

struct TheoremIntegrals {
  double grad_integral = 0.0;   // integral of |grad phi^{n+1}|^2
  double curv_integral = 0.0;   // integral of sum R^i_jij (l_i - l_j)^2
  double grad_pointwise = 0.0;  // max of the first integrand
  double curv_pointwise = 0.0;  // max of the second integrand
};

/// The two integrals whose vanishing drives the decomposition theorem,
/// plus the pointwise maxima of their (gate-nonnegative) integrands.
inline TheoremIntegrals theorem_integrals(const TensorBundle& phi, const SpectralField& sp,
                                          const CurvatureField& R) {
  const FrameField& F = phi.frame_field();
  const int n = F.n();
  const long N = F.grid().size();
  Field g2(N, 1), c2(N, 1);
  TheoremIntegrals out;
  for (long pt = 0; pt < N; ++pt) {
    double dphi2 = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          dphi2 += phi.dphi(pt, 0, i, j, k) * phi.dphi(pt, 0, i, j, k);
    double curv = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double gapl = sp.lambda(pt, i) - sp.lambda(pt, j);
        curv += R.R(pt, i, j, i, j) * gapl * gapl;
      }
    g2.at(pt, 0) = dphi2;
    c2.at(pt, 0) = curv;
    out.grad_pointwise = std::max(out.grad_pointwise, std::abs(dphi2));
    out.curv_pointwise = std::max(out.curv_pointwise, std::abs(curv));
  }
  out.grad_integral = integrate(F, g2);
  out.curv_integral = integrate(F, c2);
  return out;
}

/// Minimum sampled sectional-curvature diagnostic R^i_jij for the positivity
/// gate of the decomposition theorem.
inline double min_frame_sectional(const CurvatureField& R, const FrameField& F) {
  const int n = F.n();
  double m = std::numeric_limits<double>::infinity();
  for (long pt = 0; pt < F.grid().size(); ++pt) {
    if (!F.grid().interior(pt, R.margin())) continue;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        m = std::min(m, R.R(pt, i, j, i, j));
      }
  }
  return m;
}

}  // namespace codazzi
