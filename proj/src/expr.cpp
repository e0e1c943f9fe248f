#include "mobius/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <cstdio>
#include <cstdlib>

namespace mobius {

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

struct Expr::Node {
  Kind kind;
  Real value = 0;
  int slot = -1;
  std::string name;
  Func fn = Func::Neg;
  char op = 0;
  Expr lhs, rhs;
};

Expr Expr::constant(Real value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(int slot, std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->slot = slot;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::unary(Func fn, Expr arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Unary;
  n->fn = fn;
  n->lhs = std::move(arg);
  return Expr(std::move(n));
}

Expr Expr::binary(char op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Binary;
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }

namespace {

const char* func_name(Expr::Func fn) {
  switch (fn) {
    case Expr::Func::Neg: return "-";
    case Expr::Func::Sin: return "sin";
    case Expr::Func::Cos: return "cos";
    case Expr::Func::Sinh: return "sinh";
    case Expr::Func::Cosh: return "cosh";
    case Expr::Func::Tanh: return "tanh";
    case Expr::Func::Exp: return "exp";
    case Expr::Func::Log: return "log";
    case Expr::Func::Sqrt: return "sqrt";
  }
  return "?";
}

bool lookup_func(std::string_view name, Expr::Func& fn) {
  static constexpr std::pair<std::string_view, Expr::Func> table[] = {
      {"sin", Expr::Func::Sin},   {"cos", Expr::Func::Cos}, {"sinh", Expr::Func::Sinh},
      {"cosh", Expr::Func::Cosh}, {"tanh", Expr::Func::Tanh}, {"exp", Expr::Func::Exp},
      {"log", Expr::Func::Log},   {"sqrt", Expr::Func::Sqrt},
  };
  for (const auto& [n, f] : table)
    if (n == name) {
      fn = f;
      return true;
    }
  return false;
}

std::string format_number(Real x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.21Lg", x);
  return buf;
}

}  // namespace

Real Expr::eval(std::span<const Real> values) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Constant: return n.value;
    case Kind::Variable: return values[static_cast<std::size_t>(n.slot)];
    case Kind::Unary: {
      const Real a = n.lhs.eval(values);
      switch (n.fn) {
        case Func::Neg: return -a;
        case Func::Sin: return std::sin(a);
        case Func::Cos: return std::cos(a);
        case Func::Sinh: return std::sinh(a);
        case Func::Cosh: return std::cosh(a);
        case Func::Tanh: return std::tanh(a);
        case Func::Exp: return std::exp(a);
        case Func::Log:
          if (!(a > 0)) throw EvalError("log of non-positive argument");
          return std::log(a);
        case Func::Sqrt:
          if (a < 0) throw EvalError("sqrt of negative argument");
          return std::sqrt(a);
      }
      break;
    }
    case Kind::Binary: {
      const Real a = n.lhs.eval(values);
      const Real b = n.rhs.eval(values);
      switch (n.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/':
          if (b == 0) throw EvalError("division by zero");
          return a / b;
        case '^': {
          const Real r = std::pow(a, b);
          if (!std::isfinite(r)) throw EvalError("non-finite power");
          return r;
        }
      }
      break;
    }
  }
  throw EvalError("malformed expression");
}

std::string Expr::to_string() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Constant: return format_number(n.value);
    case Kind::Variable: return n.name;
    case Kind::Unary:
      if (n.fn == Func::Neg) return "(-" + n.lhs.to_string() + ")";
      return std::string(func_name(n.fn)) + "(" + n.lhs.to_string() + ")";
    case Kind::Binary: return "(" + n.lhs.to_string() + n.op + n.rhs.to_string() + ")";
  }
  return "?";
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case Expr::Kind::Constant: return x.value == y.value;
    case Expr::Kind::Variable: return x.slot == y.slot && x.name == y.name;
    case Expr::Kind::Unary: return x.fn == y.fn && x.lhs == y.lhs;
    case Expr::Kind::Binary: return x.op == y.op && x.lhs == y.lhs && x.rhs == y.rhs;
  }
  return false;
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& vars, int line, int column)
      : text_(text), vars_(vars), line_(line), column_(column) {}

  Expr parse() {
    Expr e = expr();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, column_ + static_cast<int>(pos_)); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) lhs = Expr::binary('+', lhs, term());
      else if (accept('-')) lhs = Expr::binary('-', lhs, term());
      else return lhs;
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = Expr::binary('*', lhs, unary());
      else if (accept('/')) lhs = Expr::binary('/', lhs, unary());
      else return lhs;
    }
  }

  Expr unary() {
    if (accept('-')) return Expr::unary(Expr::Func::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) return Expr::binary('^', base, unary());
    return base;
  }

  Expr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (accept('(')) {
      Expr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr number() {
    const std::string rest(text_.substr(pos_));
    char* end = nullptr;
    const Real value = std::strtold(rest.c_str(), &end);
    if (end == rest.c_str()) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - rest.c_str());
    return Expr::constant(value);
  }

  Expr name() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    const std::string id(text_.substr(start, pos_ - start));
    Expr::Func fn;
    if (lookup_func(id, fn)) {
      if (!accept('(')) fail("expected '(' after " + id);
      Expr arg = expr();
      if (!accept(')')) fail("expected ')'");
      return Expr::unary(fn, arg);
    }
    if (id == "pi") return Expr::constant(std::numbers::pi_v<Real>);
    for (std::size_t k = 0; k < vars_.size(); ++k)
      if (vars_[k] == id) return Expr::variable(static_cast<int>(k), id);
    pos_ = start;
    fail("unknown variable " + id);
  }

  std::string_view text_;
  const std::vector<std::string>& vars_;
  int line_, column_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expression(std::string_view text, const std::vector<std::string>& variables, int line, int column) {
  return Parser(text, variables, line, column).parse();
}

Real eval_constant(std::string_view text, int line, int column) {
  static const std::vector<std::string> none;
  return parse_expression(text, none, line, column).eval({});
}

}  // namespace mobius
