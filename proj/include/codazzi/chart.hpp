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

#include <vector>

#include "codazzi/core.hpp"

namespace codazzi {

struct Axis {
  double a = 0.0, b = 1.0;
  bool periodic = false;
  int res = 8;
};

/// Rectangular chart with per-axis extent, periodicity, and resolution.
/// Periodic axes sample a + i*h (no duplicated endpoint); non-periodic axes
/// sample open midpoints a + (i + 1/2)*h, which also gives a midpoint
/// quadrature rule near coordinate singularities.
struct ChartDomain {
  int n = 0;
  std::array<Axis, kMaxChartDim> axis{};

  void validate() const {
    if (n < 1 || n > kMaxChartDim) throw ConfigError("chart dimension out of range");
    for (int k = 0; k < n; ++k) {
      if (!(axis[k].b > axis[k].a)) throw ConfigError("chart axis needs b > a");
      if (axis[k].res < 8) throw ConfigError("chart resolution must be >= 8 per axis");
    }
  }

  bool fully_periodic() const {
    for (int k = 0; k < n; ++k)
      if (!axis[k].periodic) return false;
    return true;
  }

  ChartDomain with_resolution(int res) const {
    ChartDomain d = *this;
    for (int k = 0; k < n; ++k) d.axis[k].res = res;
    return d;
  }
};

/// Sample grid over a chart plus finite-difference stencils.
class Grid {
public:
  explicit Grid(const ChartDomain& dom) : dom_(dom) {
    dom_.validate();
    total_ = 1;
    for (int k = 0; k < dom_.n; ++k) {
      dims_[k] = dom_.axis[k].res;
      h_[k] = (dom_.axis[k].b - dom_.axis[k].a) / dims_[k];
      total_ *= dims_[k];
    }
  }

  int dim() const { return dom_.n; }
  long size() const { return total_; }
  int res(int k) const { return dims_[k]; }
  double step(int k) const { return h_[k]; }
  const ChartDomain& domain() const { return dom_; }

  std::array<int, kMaxChartDim> coords(long idx) const {
    std::array<int, kMaxChartDim> c{};
    for (int k = dom_.n - 1; k >= 0; --k) {
      c[k] = static_cast<int>(idx % dims_[k]);
      idx /= dims_[k];
    }
    return c;
  }
  long index(const std::array<int, kMaxChartDim>& c) const {
    long idx = 0;
    for (int k = 0; k < dom_.n; ++k) idx = idx * dims_[k] + c[k];
    return idx;
  }

  double coord_value(int k, int i) const {
    double off = dom_.axis[k].periodic ? 0.0 : 0.5;
    return dom_.axis[k].a + (i + off) * h_[k];
  }
  Vec point(long idx) const {
    auto c = coords(idx);
    Vec u(dom_.n);
    for (int k = 0; k < dom_.n; ++k) u[k] = coord_value(k, c[k]);
    return u;
  }

  /// Neighbor along axis k with wrap on periodic axes and clamping otherwise.
  /// Out-of-range samples on non-periodic axes only matter inside the margin
  /// band, which reductions exclude.
  long shifted(long idx, int k, int off) const {
    auto c = coords(idx);
    int i = c[k] + off;
    if (dom_.axis[k].periodic) {
      i %= dims_[k];
      if (i < 0) i += dims_[k];
    } else {
      if (i < 0) i = 0;
      if (i >= dims_[k]) i = dims_[k] - 1;
    }
    c[k] = i;
    return index(c);
  }

  /// True if the point sits at least `margin` cells away from every
  /// non-periodic boundary.
  bool interior(long idx, int margin) const {
    auto c = coords(idx);
    for (int k = 0; k < dom_.n; ++k) {
      if (dom_.axis[k].periodic) continue;
      if (c[k] < margin || c[k] >= dims_[k] - margin) return false;
    }
    return true;
  }

  double cell_volume() const {
    double v = 1.0;
    for (int k = 0; k < dom_.n; ++k) v *= h_[k];
    return v;
  }

private:
  ChartDomain dom_;
  std::array<int, kMaxChartDim> dims_{};
  std::array<double, kMaxChartDim> h_{};
  long total_ = 1;
};

/// Grid field with `ncomp` components per point, flat layout.
struct Field {
  long npts = 0;
  int ncomp = 1;
  std::vector<double> data;

  Field() = default;
  Field(long n, int c) : npts(n), ncomp(c), data(static_cast<size_t>(n) * c, 0.0) {}

  double& at(long pt, int c) { return data[static_cast<size_t>(pt) * ncomp + c]; }
  double at(long pt, int c) const { return data[static_cast<size_t>(pt) * ncomp + c]; }
};

/// Central finite difference of every component along chart axis k.
/// order 2 uses a 3-point stencil, order 4 a 5-point stencil.
inline Field fd_derivative(const Grid& g, const Field& f, int k, int order) {
  Field out(f.npts, f.ncomp);
  double h = g.step(k);
  for (long p = 0; p < f.npts; ++p) {
    if (order == 2) {
      long ip = g.shifted(p, k, 1), im = g.shifted(p, k, -1);
      for (int c = 0; c < f.ncomp; ++c)
        out.at(p, c) = (f.at(ip, c) - f.at(im, c)) / (2.0 * h);
    } else if (order == 4) {
      long ip1 = g.shifted(p, k, 1), im1 = g.shifted(p, k, -1);
      long ip2 = g.shifted(p, k, 2), im2 = g.shifted(p, k, -2);
      for (int c = 0; c < f.ncomp; ++c)
        out.at(p, c) = (-f.at(ip2, c) + 8.0 * f.at(ip1, c) - 8.0 * f.at(im1, c) +
                        f.at(im2, c)) /
                       (12.0 * h);
    } else if (order == 6) {
      long ip1 = g.shifted(p, k, 1), im1 = g.shifted(p, k, -1);
      long ip2 = g.shifted(p, k, 2), im2 = g.shifted(p, k, -2);
      long ip3 = g.shifted(p, k, 3), im3 = g.shifted(p, k, -3);
      for (int c = 0; c < f.ncomp; ++c)
        out.at(p, c) = (f.at(ip3, c) - f.at(im3, c) +
                        9.0 * (f.at(im2, c) - f.at(ip2, c)) +
                        45.0 * (f.at(ip1, c) - f.at(im1, c))) /
                       (60.0 * h);
    } else if (order == 8) {
      long ip1 = g.shifted(p, k, 1), im1 = g.shifted(p, k, -1);
      long ip2 = g.shifted(p, k, 2), im2 = g.shifted(p, k, -2);
      long ip3 = g.shifted(p, k, 3), im3 = g.shifted(p, k, -3);
      long ip4 = g.shifted(p, k, 4), im4 = g.shifted(p, k, -4);
      for (int c = 0; c < f.ncomp; ++c)
        out.at(p, c) = (3.0 * (f.at(im4, c) - f.at(ip4, c)) +
                        32.0 * (f.at(ip3, c) - f.at(im3, c)) +
                        168.0 * (f.at(im2, c) - f.at(ip2, c)) +
                        672.0 * (f.at(ip1, c) - f.at(im1, c))) /
                       (840.0 * h);
    } else if (order == 10) {
      for (int c = 0; c < f.ncomp; ++c) {
        double acc = 0.0;
        // central coefficients 5/6, -5/21, 5/84, -5/504, 1/1260 at offsets 1..5
        static constexpr double w[5] = {2100.0, -600.0, 150.0, -25.0, 2.0};
        for (int s = 1; s <= 5; ++s)
          acc += w[s - 1] * (f.at(g.shifted(p, k, s), c) - f.at(g.shifted(p, k, -s), c));
        out.at(p, c) = acc / (2520.0 * h);
      }
    } else {
      throw ConfigError("finite-difference order must be 2, 4, 6, 8, or 10");
    }
  }
  return out;
}

inline int fd_margin(int order) { return order / 2; }

/// Max |component| over points with the requested interior margin.
inline double max_abs(const Grid& g, const Field& f, int margin) {
  double m = 0.0;
  for (long p = 0; p < f.npts; ++p) {
    if (!g.interior(p, margin)) continue;
    for (int c = 0; c < f.ncomp; ++c) {
      double v = std::abs(f.at(p, c));
      if (v > m) m = v;
    }
  }
  return m;
}

}  // namespace codazzi
