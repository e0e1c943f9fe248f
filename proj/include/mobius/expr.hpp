#pragma once
/**
 * @file expr.hpp
 * @brief Small arithmetic expression language for surface components.
 *
 * Grammar (whitespace insignificant):
 *
 *     expr    := term (('+' | '-') term)*
 *     term    := unary (('*' | '/') unary)*
 *     unary   := ('-' | '+') unary | power
 *     power   := primary ('^' unary)?
 *     primary := number | name | func '(' expr ')' | '(' expr ')'
 *     func    := sin | cos | sinh | cosh | tanh | exp | log | sqrt
 *
 * `pi` is a constant. Every other name must be one of the variables supplied
 * to the parser (u, v and any previously defined `let` names).
 */

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mobius/types.hpp"

namespace mobius {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

/// Domain error while evaluating (log of non-positive, division by zero, ...).
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Expr {
 public:
  enum class Kind { Constant, Variable, Unary, Binary };
  enum class Func { Neg, Sin, Cos, Sinh, Cosh, Tanh, Exp, Log, Sqrt };

  Expr() = default;

  static Expr constant(Real value);
  static Expr variable(int slot, std::string name);
  static Expr unary(Func fn, Expr arg);
  static Expr binary(char op, Expr lhs, Expr rhs);

  bool empty() const { return !node_; }
  Kind kind() const;

  /// Evaluates with slot k bound to values[k].
  Real eval(std::span<const Real> values) const;

  /// Fully parenthesized text that parses back to an equal tree.
  std::string to_string() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Parses one expression. Positions in errors are reported relative to
/// (line, column) of the first character of `text`.
Expr parse_expression(std::string_view text, const std::vector<std::string>& variables, int line = 1, int column = 1);

/// Parses and evaluates an expression without variables.
Real eval_constant(std::string_view text, int line = 1, int column = 1);

}  // namespace mobius
