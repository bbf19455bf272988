#include "finsler/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

#include "finsler/error.hpp"

namespace finsler {

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, const std::vector<std::string>& variables, Expression& out)
      : text_(text), vars_(variables), out_(out) {}

  void run() {
    out_.root_ = parse_sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
  }

 private:
  using Node = Expression::Node;
  using Op = Expression::Op;
  using Fn = Expression::Fn;

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::Spec, "expression '" + std::string(text_) + "' at column " + std::to_string(pos_) + ": " + why);
  }

  int push(Node n) {
    out_.nodes_.push_back(n);
    return static_cast<int>(out_.nodes_.size()) - 1;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int parse_sum() {
    int lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = push({Op::Add, 0.0, 0, lhs, parse_product()});
      } else if (accept('-')) {
        lhs = push({Op::Sub, 0.0, 0, lhs, parse_product()});
      } else {
        return lhs;
      }
    }
  }

  int parse_product() {
    int lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = push({Op::Mul, 0.0, 0, lhs, parse_unary()});
      } else if (accept('/')) {
        lhs = push({Op::Div, 0.0, 0, lhs, parse_unary()});
      } else {
        return lhs;
      }
    }
  }

  int parse_unary() {
    if (accept('-')) return push({Op::Neg, 0.0, 0, parse_unary(), -1});
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  int parse_power() {
    const int base = parse_atom();
    if (!accept('^')) return base;
    const int exponent = parse_unary();
    const Node& e = out_.nodes_[static_cast<std::size_t>(exponent)];
    if (e.op == Op::Number && e.number == std::floor(e.number) && std::abs(e.number) < 64) {
      return push({Op::IntPow, 0.0, static_cast<int>(e.number), base, -1});
    }
    return push({Op::Pow, 0.0, 0, base, exponent});
  }

  int parse_atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      const int inner = parse_sum();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::string rest(text_.substr(pos_));
      char* end = nullptr;
      const double v = std::strtod(rest.c_str(), &end);
      if (end == rest.c_str()) fail("bad number");
      pos_ += static_cast<std::size_t>(end - rest.c_str());
      return push({Op::Number, v, 0, -1, -1});
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      const std::string name(text_.substr(start, pos_ - start));
      if (accept('(')) {
        static const std::pair<const char*, Fn> functions[] = {
            {"sqrt", Fn::Sqrt}, {"sin", Fn::Sin}, {"cos", Fn::Cos}, {"exp", Fn::Exp},
            {"log", Fn::Log},   {"sinh", Fn::Sinh}, {"cosh", Fn::Cosh}};
        for (const auto& [fname, fn] : functions) {
          if (name == fname) {
            const int arg = parse_sum();
            if (!accept(')')) fail("expected ')' after function argument");
            return push({Op::Call, 0.0, static_cast<int>(fn), arg, -1});
          }
        }
        fail("unknown function '" + name + "'");
      }
      if (name == "pi") return push({Op::Number, std::numbers::pi, 0, -1, -1});
      for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i] == name) return push({Op::Variable, 0.0, static_cast<int>(i), -1, -1});
      }
      fail("unknown variable '" + name + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  const std::vector<std::string>& vars_;
  Expression& out_;
  std::size_t pos_ = 0;
};

Expression Expression::parse(std::string_view text, const std::vector<std::string>& variables) {
  Expression e;
  e.text_ = std::string(text);
  ExpressionParser(text, variables, e).run();
  return e;
}

Expression Expression::constant(double value) {
  Expression e;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  e.text_ = buf;
  e.nodes_.push_back({Op::Number, value, 0, -1, -1});
  e.root_ = 0;
  return e;
}

bool Expression::is_constant() const {
  for (const Node& n : nodes_) {
    if (n.op == Op::Variable) return false;
  }
  return true;
}

double Expression::constant_value() const {
  if (!is_constant()) throw Error(ErrorKind::InvalidArgument, "expression '" + text_ + "' is not constant");
  return eval<double>(std::span<const double>{});
}

}  // namespace finsler
