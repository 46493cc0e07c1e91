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

#include <string>
#include <vector>

#include "codazzi/chart.hpp"
#include "codazzi/expr.hpp"
#include "codazzi/space_form.hpp"

namespace codazzi {

/// Parametric immersion of an n-chart into a space-form model, given as one
/// expression program per embedding coordinate (variables u1..un plus named
/// parameters).  Immutable after construction.
struct ImmersionSpec {
  std::string name;
  ParamMap params;
  SpaceForm target;
  std::vector<ExprPtr> coords;  // size target.embedding_dim
  ChartDomain chart;            // default sampling chart

  int chart_dim() const { return chart.n; }
  int codim() const { return target.ambient_dim - chart.n; }

  void validate_shape() const {
    if (static_cast<int>(coords.size()) != target.embedding_dim)
      throw ConfigError("immersion '" + name + "': expected " +
                        std::to_string(target.embedding_dim) + " coordinate programs");
    if (codim() < 1) throw ConfigError("immersion '" + name + "': codimension must be >= 1");
    chart.validate();
  }
};

template <class T>
VecT<T> immersion_point(const ImmersionSpec& imm, const VecT<T>& u) {
  ExprEnv<T> env;
  env.u = &u;
  env.params = &imm.params;
  VecT<T> X(imm.target.embedding_dim);
  for (int i = 0; i < X.n; ++i) X[i] = eval_expr(*imm.coords[i], env);
  return X;
}

/// Model-surface constraint residual |<X,X> - 1/c| at a chart point (zero for
/// the flat model by definition).
inline double model_constraint_residual(const ImmersionSpec& imm, const Vec& u) {
  if (!imm.target.quadric()) return 0.0;
  Vec X = immersion_point(imm, u);
  return std::abs(imm.target.dot(X, X) - imm.target.quadric_constant());
}

}  // namespace codazzi
