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

#include <cmath>
#include <type_traits>

namespace codazzi {

// Forward-mode dual number, nestable: Dual<Dual<double>> carries exact mixed
// second derivatives, and so on.  Order-4 jets of an immersion are obtained
// with four nested levels, one seed direction per level.
template <class T>
struct Dual {
  T v{};  // value
  T d{};  // derivative along the seeded direction of this level

  Dual() = default;
  Dual(double x) : v(x), d() {}  // NOLINT: implicit promotion is the point
  Dual(T value, T deriv) : v(std::move(value)), d(std::move(deriv)) {}

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) {
    d = d * o.v + v * o.d;
    v = v * o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    v = v / o.v;
    d = (d - v * o.d) / o.v;
    return *this;
  }
  Dual operator-() const { return Dual(-v, -d); }
};

/// Nesting depth of a (possibly nested) dual type; bounds template recursion
/// in code that differentiates itself.
template <class T>
inline constexpr int dual_depth_v = 0;
template <class T>
inline constexpr int dual_depth_v<Dual<T>> = 1 + dual_depth_v<T>;

template <class T> Dual<T> operator+(Dual<T> x, const Dual<T>& y) { return x += y; }
template <class T> Dual<T> operator-(Dual<T> x, const Dual<T>& y) { return x -= y; }
template <class T> Dual<T> operator*(Dual<T> x, const Dual<T>& y) { return x *= y; }
template <class T> Dual<T> operator/(Dual<T> x, const Dual<T>& y) { return x /= y; }

template <class T> Dual<T> operator+(Dual<T> x, double y) { return x += Dual<T>(y); }
template <class T> Dual<T> operator+(double x, Dual<T> y) { return y += Dual<T>(x); }
template <class T> Dual<T> operator-(Dual<T> x, double y) { return x -= Dual<T>(y); }
template <class T> Dual<T> operator-(double x, const Dual<T>& y) { return Dual<T>(x) - y; }
template <class T> Dual<T> operator*(Dual<T> x, double y) { return x *= Dual<T>(y); }
template <class T> Dual<T> operator*(double x, Dual<T> y) { return y *= Dual<T>(x); }
template <class T> Dual<T> operator/(Dual<T> x, double y) { return x /= Dual<T>(y); }
template <class T> Dual<T> operator/(double x, const Dual<T>& y) { return Dual<T>(x) / y; }

/// Primal (innermost value) of a possibly nested dual.
inline double primal(double x) { return x; }
template <class T>
double primal(const Dual<T>& x) { return primal(x.v); }

template <class T>
struct is_dual : std::false_type {};
template <class T>
struct is_dual<Dual<T>> : std::true_type {};

using std::cos;
using std::exp;
using std::log;
using std::sin;
using std::sqrt;
using std::tan;
using std::cosh;
using std::sinh;
using std::pow;
using std::atan;

template <class T> Dual<T> sin(const Dual<T>& x) { return {sin(x.v), cos(x.v) * x.d}; }
template <class T> Dual<T> cos(const Dual<T>& x) { return {cos(x.v), -(sin(x.v) * x.d)}; }
template <class T> Dual<T> tan(const Dual<T>& x) {
  T t = tan(x.v);
  return {t, (1.0 + t * t) * x.d};
}
template <class T> Dual<T> exp(const Dual<T>& x) {
  T e = exp(x.v);
  return {e, e * x.d};
}
template <class T> Dual<T> log(const Dual<T>& x) { return {log(x.v), x.d / x.v}; }
template <class T> Dual<T> sqrt(const Dual<T>& x) {
  T s = sqrt(x.v);
  return {s, x.d / (2.0 * s)};
}
template <class T> Dual<T> sinh(const Dual<T>& x) { return {sinh(x.v), cosh(x.v) * x.d}; }
template <class T> Dual<T> cosh(const Dual<T>& x) { return {cosh(x.v), sinh(x.v) * x.d}; }
template <class T> Dual<T> atan(const Dual<T>& x) {
  return {atan(x.v), x.d / (1.0 + x.v * x.v)};
}

// Integer powers keep exactness at zero bases; general powers go via exp/log.
template <class T>
Dual<T> pow_int(const Dual<T>& x, int k) {
  if (k == 0) return Dual<T>(1.0);
  if (k < 0) return 1.0 / pow_int(x, -k);
  Dual<T> r(1.0), b = x;
  int e = k;
  while (e > 0) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}
inline double pow_int(double x, int k) { return std::pow(x, k); }

template <class T>
Dual<T> pow(const Dual<T>& x, double y) { return exp(y * log(x)); }

}  // namespace codazzi
