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

#include <cctype>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "codazzi/core.hpp"
#include "codazzi/dual.hpp"

namespace codazzi {

// Expression vocabulary for immersion programs and scalar potentials:
// arithmetic, trig, exp/log, sqrt, hyperbolics, integer powers.  Variables are
// u1..u3 (chart coordinates) and x1..x6 (embedding coordinates of the
// immersed point, available for scalar fields on M).  Free identifiers are
// named parameters.

using ParamMap = std::map<std::string, double>;

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprKind { Num, ChartVar, EmbedVar, Param, Add, Sub, Mul, Div, Neg, PowInt, Call };

enum class ExprFn { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Atan };

struct Expr {
  ExprKind kind;
  double num = 0.0;
  int index = 0;  // variable index for ChartVar/EmbedVar, exponent for PowInt
  std::string name;
  ExprFn fn = ExprFn::Sin;
  ExprPtr a, b;
};

namespace detail {

inline ExprPtr mk(Expr e) { return std::make_shared<Expr>(std::move(e)); }

class Parser {
public:
  explicit Parser(const std::string& s) : s_(s) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != s_.size())
      throw ConfigError("expression parse error at '" + s_.substr(pos_) + "'");
    return e;
  }

private:
  const std::string& s_;
  size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
    return false;
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  ExprPtr expr() {
    ExprPtr e = term();
    for (;;) {
      if (eat('+')) e = mk({ExprKind::Add, 0, 0, "", ExprFn::Sin, e, term()});
      else if (eat('-')) e = mk({ExprKind::Sub, 0, 0, "", ExprFn::Sin, e, term()});
      else return e;
    }
  }
  ExprPtr term() {
    ExprPtr e = unary();
    for (;;) {
      if (eat('*')) e = mk({ExprKind::Mul, 0, 0, "", ExprFn::Sin, e, unary()});
      else if (eat('/')) e = mk({ExprKind::Div, 0, 0, "", ExprFn::Sin, e, unary()});
      else return e;
    }
  }
  ExprPtr unary() {
    if (eat('-')) return mk({ExprKind::Neg, 0, 0, "", ExprFn::Sin, unary(), nullptr});
    if (eat('+')) return unary();
    return power();
  }
  ExprPtr power() {
    ExprPtr base = atom();
    if (eat('^')) {
      bool neg = eat('-');
      skip_ws();
      size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) throw ConfigError("expected integer exponent after '^'");
      int k = std::stoi(s_.substr(start, pos_ - start));
      return mk({ExprKind::PowInt, 0, neg ? -k : k, "", ExprFn::Sin, base, nullptr});
    }
    return base;
  }
  ExprPtr atom() {
    skip_ws();
    if (pos_ >= s_.size()) throw ConfigError("unexpected end of expression");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t used = 0;
      double v = std::stod(s_.substr(pos_), &used);
      pos_ += used;
      return mk({ExprKind::Num, v, 0, "", ExprFn::Sin, nullptr, nullptr});
    }
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      if (!eat(')')) throw ConfigError("missing ')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string id = s_.substr(start, pos_ - start);
      if (peek() == '(') return call(id);
      return identifier(id);
    }
    throw ConfigError(std::string("unexpected character '") + c + "' in expression");
  }
  ExprPtr call(const std::string& id) {
    static const std::map<std::string, ExprFn> fns = {
        {"sin", ExprFn::Sin},   {"cos", ExprFn::Cos},   {"tan", ExprFn::Tan},
        {"exp", ExprFn::Exp},   {"log", ExprFn::Log},   {"sqrt", ExprFn::Sqrt},
        {"sinh", ExprFn::Sinh}, {"cosh", ExprFn::Cosh}, {"atan", ExprFn::Atan}};
    auto it = fns.find(id);
    if (it == fns.end()) throw ConfigError("unknown function '" + id + "'");
    if (!eat('(')) throw ConfigError("expected '(' after '" + id + "'");
    ExprPtr arg = expr();
    if (!eat(')')) throw ConfigError("missing ')' after argument of '" + id + "'");
    return mk({ExprKind::Call, 0, 0, "", it->second, arg, nullptr});
  }
  ExprPtr identifier(const std::string& id) {
    if (id == "pi")
      return mk({ExprKind::Num, 3.14159265358979323846, 0, "", ExprFn::Sin, nullptr, nullptr});
    if (id.size() == 2 && (id[0] == 'u' || id[0] == 'x') && std::isdigit(static_cast<unsigned char>(id[1]))) {
      int idx = id[1] - '1';
      if (id[0] == 'u' && idx >= 0 && idx < kMaxChartDim)
        return mk({ExprKind::ChartVar, 0, idx, "", ExprFn::Sin, nullptr, nullptr});
      if (id[0] == 'x' && idx >= 0 && idx < kMaxEmbedDim)
        return mk({ExprKind::EmbedVar, 0, idx, "", ExprFn::Sin, nullptr, nullptr});
    }
    return mk({ExprKind::Param, 0, 0, id, ExprFn::Sin, nullptr, nullptr});
  }
};

}  // namespace detail

inline ExprPtr parse_expr(const std::string& text) { return detail::Parser(text).parse(); }

/// Evaluation context: chart point u, optional embedding point x (null for
/// immersion coordinate programs), parameter bindings.
template <class T>
struct ExprEnv {
  const VecT<T>* u = nullptr;
  const VecT<T>* x = nullptr;
  const ParamMap* params = nullptr;
};

template <class T>
T eval_expr(const Expr& e, const ExprEnv<T>& env) {
  switch (e.kind) {
    case ExprKind::Num: return T(e.num);
    case ExprKind::ChartVar:
      if (!env.u || e.index >= env.u->n)
        throw ConfigError("chart variable u" + std::to_string(e.index + 1) + " not available");
      return (*env.u)[e.index];
    case ExprKind::EmbedVar:
      if (!env.x || e.index >= env.x->n)
        throw ConfigError("embedding variable x" + std::to_string(e.index + 1) + " not available");
      return (*env.x)[e.index];
    case ExprKind::Param: {
      if (env.params) {
        auto it = env.params->find(e.name);
        if (it != env.params->end()) return T(it->second);
      }
      throw ConfigError("unbound parameter '" + e.name + "'");
    }
    case ExprKind::Add: return eval_expr(*e.a, env) + eval_expr(*e.b, env);
    case ExprKind::Sub: return eval_expr(*e.a, env) - eval_expr(*e.b, env);
    case ExprKind::Mul: return eval_expr(*e.a, env) * eval_expr(*e.b, env);
    case ExprKind::Div: return eval_expr(*e.a, env) / eval_expr(*e.b, env);
    case ExprKind::Neg: return -eval_expr(*e.a, env);
    case ExprKind::PowInt: return pow_int(eval_expr(*e.a, env), e.index);
    case ExprKind::Call: {
      T x = eval_expr(*e.a, env);
      switch (e.fn) {
        case ExprFn::Sin: return sin(x);
        case ExprFn::Cos: return cos(x);
        case ExprFn::Tan: return tan(x);
        case ExprFn::Exp: return exp(x);
        case ExprFn::Log: return log(x);
        case ExprFn::Sqrt: return sqrt(x);
        case ExprFn::Sinh: return sinh(x);
        case ExprFn::Cosh: return cosh(x);
        case ExprFn::Atan: return atan(x);
      }
    }
  }
  throw ConfigError("corrupt expression node");
}

/// Collect free parameter names (for validation against supplied bindings).
inline void collect_params(const Expr& e, std::vector<std::string>& out) {
  if (e.kind == ExprKind::Param) out.push_back(e.name);
  if (e.a) collect_params(*e.a, out);
  if (e.b) collect_params(*e.b, out);
}

}  // namespace codazzi
