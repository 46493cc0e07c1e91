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

#include "codazzi/catalog.hpp"

#include <cmath>

namespace codazzi {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Polar charts stop well short of the coordinate poles; identities are local,
// and the frame/connection fields stay O(1) on the retained band.
constexpr double kPolarBand = 0.25;

double get(const ParamMap& p, const std::string& key, double def) {
  auto it = p.find(key);
  return it == p.end() ? def : it->second;
}

void require_unit_circle(double a, double b, const std::string& name) {
  if (std::abs(a * a + b * b - 1.0) > 1e-12)
    throw ConfigError("catalog constraint: " + name + " needs a^2 + b^2 = 1");
}

Axis periodic_axis(int res) { return Axis{0.0, 2.0 * kPi, true, res}; }

ImmersionSpec make(const std::string& name, ParamMap params, SpaceForm sf,
                   std::vector<std::string> coords, ChartDomain chart) {
  ImmersionSpec imm;
  imm.name = name;
  imm.params = std::move(params);
  imm.target = sf;
  for (const auto& c : coords) imm.coords.push_back(parse_expr(c));
  imm.chart = chart;
  imm.validate_shape();
  return imm;
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {"round_sphere", "round_sphere(n, r)",
       "round n-sphere of radius r in R^(n+1), n in {1,2,3}; polar chart"},
      {"clifford_torus", "clifford_torus(a, b)",
       "product torus S^1(a) x S^1(b) in the unit 3-sphere, a^2 + b^2 = 1"},
      {"flat_torus_R4", "flat_torus_R4(a, b)", "S^1(a) x S^1(b) in flat R^4 (codimension 2)"},
      {"sphere_product", "sphere_product(p, q, a, b)",
       "S^p(a) x S^q(b) in the unit (p+q+1)-sphere, a^2 + b^2 = 1, p+q <= 3"},
      {"ellipsoid", "ellipsoid(a1, a2, a3)", "ellipsoid with semi-axes a1, a2, a3 in R^3"},
      {"torus_of_revolution", "torus_of_revolution(R, r)",
       "torus of revolution in R^3, tube radius r around a circle of radius R"},
      {"graph_immersion", "graph_immersion(f1, f2)",
       "graph (u, v, f1(u,v), f2(u,v)) in flat R^4 (codimension 2); f1, f2 expressions"},
  };
  return entries;
}

ImmersionSpec catalog(const std::string& name, const ParamMap& params,
                      const std::map<std::string, std::string>& exprs) {
  if (name == "round_sphere") {
    int n = static_cast<int>(get(params, "n", 2));
    double r = get(params, "r", 1.0);
    if (r <= 0) throw ConfigError("catalog constraint: round_sphere needs r > 0");
    ParamMap p = {{"n", double(n)}, {"r", r}};
    ChartDomain chart;
    if (n == 1) {
      chart.n = 1;
      chart.axis[0] = periodic_axis(128);
      return make(name, p, SpaceForm::flat(2), {"r*cos(u1)", "r*sin(u1)"}, chart);
    }
    if (n == 2) {
      // u1 = polar angle from the north pole, u2 = azimuth.
      chart.n = 2;
      chart.axis[0] = Axis{kPolarBand, kPi - kPolarBand, false, 128};
      chart.axis[1] = periodic_axis(128);
      return make(name, p, SpaceForm::flat(3),
                  {"r*sin(u1)*cos(u2)", "r*sin(u1)*sin(u2)", "r*cos(u1)"}, chart);
    }
    if (n == 3) {
      chart.n = 3;
      chart.axis[0] = Axis{kPolarBand, kPi - kPolarBand, false, 32};
      chart.axis[1] = Axis{kPolarBand, kPi - kPolarBand, false, 32};
      chart.axis[2] = periodic_axis(32);
      return make(name, p, SpaceForm::flat(4),
                  {"r*cos(u1)", "r*sin(u1)*cos(u2)", "r*sin(u1)*sin(u2)*cos(u3)",
                   "r*sin(u1)*sin(u2)*sin(u3)"},
                  chart);
    }
    throw ConfigError("catalog constraint: round_sphere supports n in {1,2,3}");
  }

  if (name == "clifford_torus" || name == "flat_torus_R4") {
    double a = get(params, "a", name == "clifford_torus" ? std::sqrt(0.5) : 1.0);
    double b = get(params, "b", name == "clifford_torus" ? std::sqrt(0.5) : 2.0);
    if (a <= 0 || b <= 0) throw ConfigError("catalog constraint: radii must be positive");
    if (name == "clifford_torus") require_unit_circle(a, b, name);
    ChartDomain chart;
    chart.n = 2;
    chart.axis[0] = periodic_axis(128);
    chart.axis[1] = periodic_axis(128);
    SpaceForm sf = name == "clifford_torus" ? SpaceForm::spherical(3, 1.0) : SpaceForm::flat(4);
    return make(name, {{"a", a}, {"b", b}}, sf,
                {"a*cos(u1)", "a*sin(u1)", "b*cos(u2)", "b*sin(u2)"}, chart);
  }

  if (name == "sphere_product") {
    int fp = static_cast<int>(get(params, "p", 1));
    int fq = static_cast<int>(get(params, "q", 2));
    double a = get(params, "a", 0.6);
    double b = get(params, "b", 0.8);
    require_unit_circle(a, b, name);
    if (fp < 1 || fq < 1 || fp + fq > 3)
      throw ConfigError("catalog constraint: sphere_product needs p, q >= 1, p + q <= 3");
    if (fp > fq) std::swap(fp, fq);  // canonical order: circle factor first
    ParamMap p = {{"p", double(fp)}, {"q", double(fq)}, {"a", a}, {"b", b}};
    ChartDomain chart;
    if (fq == 1) {  // S^1(a) x S^1(b) in S^3
      chart.n = 2;
      chart.axis[0] = periodic_axis(128);
      chart.axis[1] = periodic_axis(128);
      return make(name, p, SpaceForm::spherical(3, 1.0),
                  {"a*cos(u1)", "a*sin(u1)", "b*cos(u2)", "b*sin(u2)"}, chart);
    }
    // S^1(a) x S^2(b) in S^4: u1 on the circle, (u2, u3) polar chart on S^2.
    chart.n = 3;
    chart.axis[0] = periodic_axis(32);
    chart.axis[1] = Axis{kPolarBand, kPi - kPolarBand, false, 32};
    chart.axis[2] = periodic_axis(32);
    return make(name, p, SpaceForm::spherical(4, 1.0),
                {"a*cos(u1)", "a*sin(u1)", "b*sin(u2)*cos(u3)", "b*sin(u2)*sin(u3)",
                 "b*cos(u2)"},
                chart);
  }

  if (name == "ellipsoid") {
    double a1 = get(params, "a1", 2.0), a2 = get(params, "a2", 1.0), a3 = get(params, "a3", 1.0);
    if (a1 <= 0 || a2 <= 0 || a3 <= 0)
      throw ConfigError("catalog constraint: ellipsoid semi-axes must be positive");
    ChartDomain chart;
    chart.n = 2;
    // u1 = latitude (poles excluded), u2 = longitude.
    chart.axis[0] = Axis{-kPi / 2 + kPolarBand, kPi / 2 - kPolarBand, false, 128};
    chart.axis[1] = periodic_axis(128);
    return make(name, {{"a1", a1}, {"a2", a2}, {"a3", a3}}, SpaceForm::flat(3),
                {"a1*cos(u1)*cos(u2)", "a2*cos(u1)*sin(u2)", "a3*sin(u1)"}, chart);
  }

  if (name == "torus_of_revolution") {
    double R = get(params, "R", 2.0), r = get(params, "r", 1.0);
    if (!(R > r && r > 0))
      throw ConfigError("catalog constraint: torus_of_revolution needs R > r > 0");
    ChartDomain chart;
    chart.n = 2;
    chart.axis[0] = periodic_axis(128);
    chart.axis[1] = periodic_axis(128);
    return make(name, {{"R", R}, {"r", r}}, SpaceForm::flat(3),
                {"(R + r*cos(u1))*cos(u2)", "(R + r*cos(u1))*sin(u2)", "r*sin(u1)"}, chart);
  }

  if (name == "graph_immersion") {
    std::string f1 = "0.3*u1^2 + 0.2*u1*u2";
    std::string f2 = "0.25*u2^2 - 0.15*u1*u2";
    if (auto it = exprs.find("f1"); it != exprs.end()) f1 = it->second;
    if (auto it = exprs.find("f2"); it != exprs.end()) f2 = it->second;
    ChartDomain chart;
    chart.n = 2;
    chart.axis[0] = Axis{-0.5, 0.5, false, 128};
    chart.axis[1] = Axis{-0.5, 0.5, false, 128};
    return make(name, params, SpaceForm::flat(4), {"u1", "u2", f1, f2}, chart);
  }

  throw ConfigError("unknown catalog immersion '" + name + "'");
}

}  // namespace codazzi
