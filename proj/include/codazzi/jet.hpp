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

#include "codazzi/immersion.hpp"

namespace codazzi {

/// Multi-index for mixed partials, m[k] = derivative count along axis k.
struct MultiIndex {
  std::array<int, kMaxChartDim> m{};

  int order() const { return m[0] + m[1] + m[2]; }
  bool operator<(const MultiIndex& o) const { return m < o.m; }
};

/// Point value plus all mixed partial derivatives of an immersion up to a
/// requested order (<= 4), symmetric in the derivative indices by
/// construction.
struct Jet {
  int chart_dim = 0;
  int order = 0;
  std::map<MultiIndex, Vec> partials;

  const Vec& partial(const MultiIndex& mi) const {
    auto it = partials.find(mi);
    if (it == partials.end()) throw ConfigError("jet: multi-index beyond stored order");
    return it->second;
  }
  const Vec& value() const { return partial(MultiIndex{}); }
};

namespace detail {

template <int L>
struct NestedDualT {
  using type = Dual<typename NestedDualT<L - 1>::type>;
};
template <>
struct NestedDualT<0> {
  using type = double;
};

// Seeded chart coordinate for a depth-L nested dual: derivative 1 at every
// level whose direction matches axis k.
template <int L>
struct Seed {
  using T = typename NestedDualT<L>::type;
  static T make(double value, const std::array<int, 4>& dirs, int k) {
    T x;
    x.v = Seed<L - 1>::make(value, dirs, k);
    x.d = typename NestedDualT<L - 1>::type(dirs[L - 1] == k ? 1.0 : 0.0);
    return x;
  }
};
template <>
struct Seed<0> {
  static double make(double value, const std::array<int, 4>&, int) { return value; }
};

inline double dual_component(double x, unsigned bits) {
  (void)bits;
  return x;
}
template <class T>
double dual_component(const Dual<T>& x, unsigned bits) {
  return bits & 1u ? dual_component(x.d, bits >> 1) : dual_component(x.v, bits >> 1);
}

template <int L>
void jet_pass(const ImmersionSpec& imm, const Vec& u, const std::array<int, 4>& dirs, Jet& jet) {
  using T = typename NestedDualT<L>::type;
  const int n = imm.chart_dim();
  VecT<T> ud(n);
  for (int k = 0; k < n; ++k) ud[k] = Seed<L>::make(u[k], dirs, k);
  VecT<T> X = immersion_point(imm, ud);
  // Every subset of the L seeded levels yields one mixed partial.
  for (unsigned bits = 0; bits < (1u << L); ++bits) {
    MultiIndex mi;
    // Bit lvl of `bits` selects the derivative slot lvl levels below the
    // outermost dual, which Seed aligned with direction dirs[L - 1 - lvl].
    for (int lvl = 0; lvl < L; ++lvl)
      if (bits & (1u << lvl)) ++mi.m[static_cast<size_t>(dirs[L - 1 - lvl])];
    Vec out(X.n);
    for (int i = 0; i < X.n; ++i) out[i] = dual_component(X[i], bits);
    jet.partials[mi] = out;
  }
}

}  // namespace detail

/// Exact jets through nested forward-mode duals: one pass per sorted
/// direction tuple of length `order`, each pass filling all sub-multi-indices.
inline Jet evaluate_jet(const ImmersionSpec& imm, const Vec& u, int order) {
  if (order < 0 || order > 4) throw ConfigError("jet order must be in [0, 4]");
  const int n = imm.chart_dim();
  Jet jet;
  jet.chart_dim = n;
  jet.order = order;
  std::array<int, 4> dirs{};
  auto run = [&](int len) {
    switch (len) {
      case 0: detail::jet_pass<0>(imm, u, dirs, jet); break;
      case 1: detail::jet_pass<1>(imm, u, dirs, jet); break;
      case 2: detail::jet_pass<2>(imm, u, dirs, jet); break;
      case 3: detail::jet_pass<3>(imm, u, dirs, jet); break;
      case 4: detail::jet_pass<4>(imm, u, dirs, jet); break;
      default: break;
    }
  };
  if (order == 0) {
    run(0);
    return jet;
  }
  // Sorted tuples d1 <= d2 <= ... <= d_order cover all multisets.
  std::array<int, 4> d{};
  auto rec = [&](auto&& self, int pos, int lo) -> void {
    if (pos == order) {
      dirs = d;
      run(order);
      return;
    }
    for (int k = lo; k < n; ++k) {
      d[static_cast<size_t>(pos)] = k;
      self(self, pos + 1, k);
    }
  };
  rec(rec, 0, 0);
  return jet;
}

/// Independent central-difference jet oracle at a fixed step.  Mixed partials
/// use tensor products of 1D central stencils; agreement with the dual path
/// is O(step^2).
inline Jet evaluate_jet_fd(const ImmersionSpec& imm, const Vec& u, int order, double step) {
  if (order < 0 || order > 4) throw ConfigError("jet order must be in [0, 4]");
  const int n = imm.chart_dim();
  // weights[m] maps offset -> coefficient for the m-th derivative / step^m
  static const std::map<int, std::map<int, double>> stencils = {
      {0, {{0, 1.0}}},
      {1, {{-1, -0.5}, {1, 0.5}}},
      {2, {{-1, 1.0}, {0, -2.0}, {1, 1.0}}},
      {3, {{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}}},
      {4, {{-2, 1.0}, {-1, -4.0}, {0, 6.0}, {1, -4.0}, {2, 1.0}}}};
  Jet jet;
  jet.chart_dim = n;
  jet.order = order;
  std::vector<MultiIndex> mis;
  {
    MultiIndex mi;
    auto rec = [&](auto&& self, int axis) -> void {
      if (axis == n) {
        if (mi.order() <= order) mis.push_back(mi);
        return;
      }
      for (int m = 0; m + mi.order() <= order; ++m) {
        mi.m[static_cast<size_t>(axis)] = m;
        self(self, axis + 1);
      }
      mi.m[static_cast<size_t>(axis)] = 0;
    };
    rec(rec, 0);
  }
  for (const auto& mi : mis) {
    Vec acc(imm.target.embedding_dim);
    double scale = 1.0;
    for (int k = 0; k < n; ++k) scale /= std::pow(step, mi.m[static_cast<size_t>(k)]);
    // tensor product over axes
    std::array<int, kMaxChartDim> off{};
    auto rec = [&](auto&& self, int axis, double w) -> void {
      if (axis == n) {
        Vec shifted = u;
        for (int k = 0; k < n; ++k) shifted[k] += off[static_cast<size_t>(k)] * step;
        Vec X = immersion_point(imm, shifted);
        for (int i = 0; i < X.n; ++i) acc[i] += w * X[i];
        return;
      }
      for (const auto& [o, c] : stencils.at(mi.m[static_cast<size_t>(axis)])) {
        off[static_cast<size_t>(axis)] = o;
        self(self, axis + 1, w * c);
      }
    };
    rec(rec, 0, 1.0);
    for (int i = 0; i < acc.n; ++i) acc[i] *= scale;
    jet.partials[mi] = acc;
  }
  return jet;
}

/// Largest discrepancy between two jets over shared multi-indices.
inline double jet_discrepancy(const Jet& a, const Jet& b) {
  double m = 0.0;
  for (const auto& [mi, va] : a.partials) {
    auto it = b.partials.find(mi);
    if (it == b.partials.end()) continue;
    for (int i = 0; i < va.n; ++i) m = std::max(m, std::abs(va[i] - it->second[i]));
  }
  return m;
}

}  // namespace codazzi
