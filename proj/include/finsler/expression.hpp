#pragma once

// Restricted arithmetic expressions used for closed-form metric entries and
// ODE right-hand sides in metric specs: + - * / ^, unary minus, numeric
// literals, `pi`, named variables and the functions sqrt, sin, cos, exp, log,
// sinh, cosh. Expressions evaluate over any scalar ring the library uses.

#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "finsler/jet.hpp"

namespace finsler {

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

class Expression {
 public:
  Expression() = default;

  /// Throws Error(Spec) on syntax errors or unknown identifiers.
  static Expression parse(std::string_view text, const std::vector<std::string>& variables);
  static Expression constant(double value);

  const std::string& text() const { return text_; }
  bool is_constant() const;
  /// Value when the expression does not reference any variable.
  double constant_value() const;

  template <class S>
  S eval(std::span<const S> vars) const {
    return eval_node<S>(root_, vars);
  }

 private:
  enum class Op { Number, Variable, Add, Sub, Mul, Div, Neg, Pow, IntPow, Call };
  enum class Fn { Sqrt, Sin, Cos, Exp, Log, Sinh, Cosh };

  struct Node {
    Op op = Op::Number;
    double number = 0.0;
    int index = 0;  // variable slot, integer exponent, or Fn
    int lhs = -1;
    int rhs = -1;
  };

  template <class S>
  S eval_node(int id, std::span<const S> vars) const {
    using std::cos;
    using std::cosh;
    using std::exp;
    using std::log;
    using std::pow;
    using std::sin;
    using std::sinh;
    using std::sqrt;
    const Node& nd = nodes_[static_cast<std::size_t>(id)];
    switch (nd.op) {
      case Op::Number: return S(nd.number);
      case Op::Variable: return vars[static_cast<std::size_t>(nd.index)];
      case Op::Add: return eval_node<S>(nd.lhs, vars) + eval_node<S>(nd.rhs, vars);
      case Op::Sub: return eval_node<S>(nd.lhs, vars) - eval_node<S>(nd.rhs, vars);
      case Op::Mul: return eval_node<S>(nd.lhs, vars) * eval_node<S>(nd.rhs, vars);
      case Op::Div: return eval_node<S>(nd.lhs, vars) / eval_node<S>(nd.rhs, vars);
      case Op::Neg: return -eval_node<S>(nd.lhs, vars);
      case Op::IntPow: return pow(eval_node<S>(nd.lhs, vars), nd.index);
      case Op::Pow: return exp(eval_node<S>(nd.rhs, vars) * log(eval_node<S>(nd.lhs, vars)));
      case Op::Call: {
        const S a = eval_node<S>(nd.lhs, vars);
        switch (static_cast<Fn>(nd.index)) {
          case Fn::Sqrt: return sqrt(a);
          case Fn::Sin: return sin(a);
          case Fn::Cos: return cos(a);
          case Fn::Exp: return exp(a);
          case Fn::Log: return log(a);
          case Fn::Sinh: return sinh(a);
          case Fn::Cosh: return cosh(a);
        }
      }
    }
    return S(0.0);
  }

  friend class ExpressionParser;

  std::string text_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace finsler
