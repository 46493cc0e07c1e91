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

#include <array>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

namespace codazzi {

// Compile-time caps: charts have n <= 3, ambient quadric embeddings need at
// most 6 linear coordinates, frames at most 5 vectors (n + p <= 5).
inline constexpr int kMaxChartDim = 3;
inline constexpr int kMaxEmbedDim = 6;
inline constexpr int kMaxFrameDim = 5;

/// Error thrown when the geometry itself is unusable (degenerate immersion,
/// off-model samples, frame discontinuity).  Carries the pipeline stage.
class GeometryError : public std::runtime_error {
public:
  GeometryError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

private:
  std::string stage_;
};

/// Error thrown for malformed configuration / expression input.
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Small runtime-sized vector/matrix over an arbitrary scalar (double or a
// nested dual).  Sizes are tiny and bounded, so everything lives on the stack.
// ---------------------------------------------------------------------------

template <class T>
struct VecT {
  int n = 0;
  std::array<T, kMaxEmbedDim> a{};

  VecT() = default;
  explicit VecT(int size) : n(size) {}

  T& operator[](int i) { return a[static_cast<size_t>(i)]; }
  const T& operator[](int i) const { return a[static_cast<size_t>(i)]; }

  VecT& operator+=(const VecT& o) {
    for (int i = 0; i < n; ++i) a[i] += o.a[i];
    return *this;
  }
  VecT& operator-=(const VecT& o) {
    for (int i = 0; i < n; ++i) a[i] -= o.a[i];
    return *this;
  }
  template <class S>
  VecT& operator*=(const S& s) {
    for (int i = 0; i < n; ++i) a[i] = a[i] * s;
    return *this;
  }
};

template <class T>
VecT<T> operator+(VecT<T> x, const VecT<T>& y) { return x += y; }
template <class T>
VecT<T> operator-(VecT<T> x, const VecT<T>& y) { return x -= y; }
template <class T, class S>
VecT<T> operator*(VecT<T> x, const S& s) { return x *= s; }
template <class T, class S>
VecT<T> operator*(const S& s, VecT<T> x) { return x *= s; }

template <class T>
struct MatT {
  int rows = 0, cols = 0;
  std::array<T, kMaxFrameDim * kMaxFrameDim> a{};

  MatT() = default;
  MatT(int r, int c) : rows(r), cols(c) {}

  T& operator()(int i, int j) { return a[static_cast<size_t>(i * cols + j)]; }
  const T& operator()(int i, int j) const {
    return a[static_cast<size_t>(i * cols + j)];
  }
};

using Vec = VecT<double>;
using Mat = MatT<double>;

// Solve A x = b for a small n x n system by Gaussian elimination with partial
// pivoting on primal magnitude.  Used to invert the frame/chart Jacobian.
template <class T, class PrimalFn>
VecT<T> solve_small(MatT<T> A, VecT<T> b, PrimalFn primal_of) {
  const int n = A.rows;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(primal_of(A(col, col)));
    for (int r = col + 1; r < n; ++r) {
      double m = std::abs(primal_of(A(r, col)));
      if (m > best) { best = m; piv = r; }
    }
    if (best == 0.0) throw GeometryError("linear-solve", "singular matrix");
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(A(col, c), A(piv, c));
      std::swap(b[col], b[piv]);
    }
    for (int r = col + 1; r < n; ++r) {
      T f = A(r, col) / A(col, col);
      for (int c = col; c < n; ++c) A(r, c) -= f * A(col, c);
      b[r] -= f * b[col];
    }
  }
  VecT<T> x(n);
  for (int r = n - 1; r >= 0; --r) {
    T s = b[r];
    for (int c = r + 1; c < n; ++c) s -= A(r, c) * x[c];
    x[r] = s / A(r, r);
  }
  return x;
}

}  // namespace codazzi
