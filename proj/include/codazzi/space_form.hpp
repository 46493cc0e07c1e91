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

#include "codazzi/core.hpp"
#include "codazzi/dual.hpp"

namespace codazzi {

enum class Model { Flat, Spherical, Hyperbolic };

/// Constant-curvature ambient, realized through its standard linear-space
/// model: R^(n+p) when flat, the radius-1/sqrt(c) quadric in R^(n+p+1) when
/// spherical, the hyperboloid sheet in Lorentzian R^(1,n+p) when hyperbolic
/// (the single negative direction is the first embedding coordinate).
struct SpaceForm {
  double c = 0.0;
  Model model = Model::Flat;
  int ambient_dim = 0;    // n + p
  int embedding_dim = 0;  // n + p for flat, n + p + 1 otherwise

  static SpaceForm flat(int ambient) { return {0.0, Model::Flat, ambient, ambient}; }
  static SpaceForm spherical(int ambient, double curv) {
    if (curv <= 0) throw ConfigError("spherical model needs c > 0");
    return {curv, Model::Spherical, ambient, ambient + 1};
  }
  static SpaceForm hyperbolic(int ambient, double curv) {
    if (curv >= 0) throw ConfigError("hyperbolic model needs c < 0");
    return {curv, Model::Hyperbolic, ambient, ambient + 1};
  }

  bool quadric() const { return model != Model::Flat; }
  double metric_sign(int i) const {
    return (model == Model::Hyperbolic && i == 0) ? -1.0 : 1.0;
  }

  /// Inner product of the linear embedding space (Lorentzian if hyperbolic).
  template <class T>
  T dot(const VecT<T>& x, const VecT<T>& y) const {
    T s{};
    for (int i = 0; i < x.n; ++i) s += metric_sign(i) * x[i] * y[i];
    return s;
  }

  /// <X,X> constraint value for points on the model: 1/c (equals -1/|c| when
  /// hyperbolic).  Meaningless for the flat model.
  double quadric_constant() const { return 1.0 / c; }

  /// Project v onto the model tangent space at X (identity when flat).
  template <class T>
  VecT<T> project(const VecT<T>& X, VecT<T> v) const {
    if (!quadric()) return v;
    T f = c * dot(v, X);
    for (int i = 0; i < v.n; ++i) v[i] -= f * X[i];
    return v;
  }
};

/// Ambient curvature of a space form in any orthonormal frame:
/// R~^A_BCD = (delta^A_C delta_BD - delta^A_D delta_BC) c.
inline double ambient_curvature(const SpaceForm& sf, int A, int B, int C, int D) {
  if (A < 0 || B < 0 || C < 0 || D < 0 || A >= sf.ambient_dim || B >= sf.ambient_dim ||
      C >= sf.ambient_dim || D >= sf.ambient_dim)
    throw ConfigError("ambient curvature index out of range");
  double dAC = A == C ? 1.0 : 0.0, dBD = B == D ? 1.0 : 0.0;
  double dAD = A == D ? 1.0 : 0.0, dBC = B == C ? 1.0 : 0.0;
  return (dAC * dBD - dAD * dBC) * sf.c;
}

}  // namespace codazzi
