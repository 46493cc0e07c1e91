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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "codazzi/catalog.hpp"
#include "codazzi/chart.hpp"
#include "codazzi/dual.hpp"
#include "codazzi/expr.hpp"
#include "codazzi/jet.hpp"

using namespace codazzi;

TEST_CASE("dual numbers: first derivative of sin*exp") {
  // Oracle: d/dx [sin(x) e^x] = (sin x + cos x) e^x, evaluated independently.
  double x0 = 0.7;
  Dual<double> x{x0, 1.0};
  Dual<double> y = sin(x) * exp(x);
  CHECK(y.v == doctest::Approx(std::sin(x0) * std::exp(x0)).epsilon(1e-14));
  CHECK(y.d ==
        doctest::Approx((std::sin(x0) + std::cos(x0)) * std::exp(x0)).epsilon(1e-14));
}

TEST_CASE("dual numbers: nested second derivative and quotients") {
  // Oracle: f(x) = tan(x)/(1+x^2); second derivative checked against a
  // tight central difference of the analytic first derivative.
  auto f = [](auto x) { return tan(x) / (1.0 + x * x); };
  auto fp = [](double x) {
    double t = std::tan(x), s = 1.0 + x * x;
    return (1.0 + t * t) / s - 2.0 * x * t / (s * s);
  };
  double x0 = 0.4;
  Dual<Dual<double>> x{{x0, 1.0}, {1.0, 0.0}};
  auto y = f(x);
  CHECK(y.v.v == doctest::Approx(f(x0)).epsilon(1e-14));
  CHECK(y.v.d == doctest::Approx(fp(x0)).epsilon(1e-13));
  double h = 1e-6;
  double fpp = (fp(x0 + h) - fp(x0 - h)) / (2 * h);
  CHECK(y.d.d == doctest::Approx(fpp).epsilon(1e-7));
}

TEST_CASE("dual numbers: integer powers are exact at zero base") {
  Dual<double> x{0.0, 1.0};
  auto y = pow_int(x, 3);
  CHECK(y.v == 0.0);
  CHECK(y.d == 0.0);  // 3 x^2 at x=0
  auto z = pow_int(x, 1);
  CHECK(z.d == 1.0);
}

TEST_CASE("expression parser: arithmetic, powers, constants") {
  VecT<double> u(2);
  u[0] = 0.5;
  u[1] = -0.25;
  ExprEnv<double> env;
  env.u = &u;
  auto e = parse_expr("0.3*u1^2 + 0.2*u1*u2");
  CHECK(eval_expr(*e, env) == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(eval_expr(*parse_expr("2*3^2"), env) == doctest::Approx(18.0));
  CHECK(eval_expr(*parse_expr("-u1^2"), env) == doctest::Approx(-0.25));
  CHECK(eval_expr(*parse_expr("cos(pi)"), env) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(eval_expr(*parse_expr("(1+2)*(3-1)/4"), env) == doctest::Approx(1.5));
}

TEST_CASE("expression parser: named parameters and functions") {
  VecT<double> u(1);
  u[0] = 0.3;
  ParamMap pm{{"r0", 1.2}};
  ExprEnv<double> env;
  env.u = &u;
  env.params = &pm;
  auto e = parse_expr("sinh(r0)*cos(u1) + sqrt(4)");
  CHECK(eval_expr(*e, env) ==
        doctest::Approx(std::sinh(1.2) * std::cos(0.3) + 2.0).epsilon(1e-15));
  std::vector<std::string> names;
  collect_params(*e, names);
  CHECK(names == std::vector<std::string>{"r0"});
  CHECK_THROWS_AS(parse_expr("frob(u1)"), ConfigError);
  CHECK_THROWS_AS(parse_expr("u1 +"), ConfigError);
}

TEST_CASE("grid: node placement and wrapping") {
  ChartDomain dom;
  dom.n = 2;
  dom.axis[0] = {0.0, 1.0, false, 8};
  dom.axis[1] = {0.0, 2 * M_PI, true, 16};
  Grid g(dom);
  CHECK(g.size() == 8 * 16);
  // Non-periodic axes use midpoints, periodic axes use left nodes.
  Vec p0 = g.point(0);
  CHECK(p0[0] == doctest::Approx(0.0625));
  CHECK(p0[1] == doctest::Approx(0.0));
  // Wrap on the periodic axis, clamp on the bounded one.
  long idx = g.index({0, 15});
  CHECK(g.shifted(idx, 1, 1) == g.index({0, 0}));
  CHECK(g.shifted(0, 0, -1) == 0);
  CHECK_FALSE(g.interior(0, 1));
  CHECK(g.interior(g.index({2, 0}), 2));
}

TEST_CASE("finite differences: order-2 and order-4 accuracy on sin") {
  ChartDomain dom;
  dom.n = 1;
  dom.axis[0] = {0.0, 2 * M_PI, true, 64};
  Grid g(dom);
  Field f(g.size(), 1);
  for (long i = 0; i < g.size(); ++i) f.at(i, 0) = std::sin(g.point(i)[0]);
  for (int order : {2, 4}) {
    Field df = fd_derivative(g, f, 0, order);
    double err = 0;
    for (long i = 0; i < g.size(); ++i)
      err = std::max(err, std::abs(df.at(i, 0) - std::cos(g.point(i)[0])));
    if (order == 2) CHECK(err < 2e-3);
    else CHECK(err < 5e-6);
  }
}

TEST_CASE("small linear solver") {
  Mat A(3, 3);
  A(0, 0) = 2; A(0, 1) = 1; A(0, 2) = 0;
  A(1, 0) = 1; A(1, 1) = 3; A(1, 2) = 1;
  A(2, 0) = 0; A(2, 1) = 1; A(2, 2) = 4;
  Vec x(3);
  x[0] = 1; x[1] = -2; x[2] = 0.5;
  Vec b(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b[i] += A(i, j) * x[j];
  Vec y = solve_small(A, b, [](double v) { return v; });
  for (int i = 0; i < 3; ++i) CHECK(y[i] == doctest::Approx(x[i]).epsilon(1e-13));
}

TEST_CASE("jets: dual route matches analytic derivatives on a torus chart") {
  ImmersionSpec imm = catalog("clifford_torus");
  Vec u(2);
  u[0] = 0.4;
  u[1] = -0.9;
  Jet j = evaluate_jet(imm, u, 4);
  const double a = 1.0 / std::sqrt(2.0);
  // Oracle: X1 = a cos(u1); fourth derivative in u1 is a cos(u1) again.
  CHECK(j.partial(MultiIndex{{1, 0, 0}})[0] ==
        doctest::Approx(-a * std::sin(0.4)).epsilon(1e-14));
  CHECK(j.partial(MultiIndex{{4, 0, 0}})[0] ==
        doctest::Approx(a * std::cos(0.4)).epsilon(1e-12));
  CHECK(j.partial(MultiIndex{{1, 1, 0}})[0] == doctest::Approx(0.0));
  CHECK(j.partial(MultiIndex{{1, 1, 0}})[2] == doctest::Approx(0.0));
}

TEST_CASE("jets: finite-difference oracle agrees and converges at order 2") {
  // Needs a non-polynomial immersion: central stencils are exact on the
  // quadratic graph family, leaving only roundoff to compare.
  ImmersionSpec imm = catalog("torus_of_revolution");
  Vec u(2);
  u[0] = 0.1;
  u[1] = -0.2;
  Jet exact = evaluate_jet(imm, u, 3);
  double d1 = jet_discrepancy(exact, evaluate_jet_fd(imm, u, 3, 1e-2));
  double d2 = jet_discrepancy(exact, evaluate_jet_fd(imm, u, 3, 5e-3));
  CHECK(d1 < 1e-3);
  // Halving the step should cut the error by about 4; require at least 3.5x.
  CHECK(d1 / d2 > 3.5);
}

TEST_CASE("catalog: families validate and constraints are enforced") {
  CHECK(catalog_entries().size() == 7);
  for (const auto& e : catalog_entries()) {
    ImmersionSpec imm = catalog(e.name);
    imm.validate_shape();
    CHECK(imm.chart.n >= 1);
  }
  CHECK_THROWS_AS(catalog("clifford_torus", {{"a", 0.9}, {"b", 0.9}}), ConfigError);
  CHECK_THROWS_AS(catalog("no_such_family"), ConfigError);
  CHECK_THROWS_AS(catalog("round_sphere", {{"r", -1.0}}), ConfigError);
}

TEST_CASE("catalog: immersions satisfy the target model constraint") {
  for (const char* name : {"round_sphere", "clifford_torus", "sphere_product"}) {
    ImmersionSpec imm = catalog(name);
    Grid g(imm.chart);
    for (long i = 0; i < g.size(); i += std::max<long>(1, g.size() / 37)) {
      CHECK(model_constraint_residual(imm, g.point(i)) < 1e-12);
    }
  }
}
