#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "tsvar/dual.hpp"
#include "tsvar/errors.hpp"

namespace tsvar {

/// Arithmetic expression over a fixed list of variable names.
///
/// Grammar (see docs/expression_grammar.md):
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?
///   primary := number | name | func '(' expr ')' | '(' expr ')'
/// so ^ is right-associative and binds tighter than unary minus.
class Expression {
 public:
  enum class Op { constant, variable, neg, sin, cos, exp, log, sqrt, add, sub, mul, div, pow };

  struct Node {
    Op op = Op::constant;
    double constant = 0.0;
    std::size_t variable = 0;
    std::size_t lhs = 0;
    std::size_t rhs = 0;
  };

  /// Parses `text`; identifiers must be one of `variables` or a function name.
  static Expression parse(std::string_view text, std::vector<std::string> variables);

  const std::vector<std::string>& variables() const noexcept { return variables_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::size_t root() const noexcept { return root_; }

  /// Evaluates with `args[k]` bound to variables()[k]. T is double or Dual<N>.
  /// Throws DomainError for log/sqrt outside their domain, division by zero and
  /// a negative base raised to a non-integer power.
  template <class T>
  T evaluate(std::span<const T> args) const {
    if (args.size() != variables_.size()) {
      throw ValidationError("expression expects " + std::to_string(variables_.size()) +
                            " arguments");
    }
    return eval_node<T>(root_, args);
  }

  /// Fully parenthesized text that parses back to an equivalent expression.
  std::string to_string() const { return print(root_); }

 private:
  template <class T>
  static double value_of(const T& x) {
    if constexpr (std::is_same_v<T, double>) {
      return x;
    } else {
      return x.value;
    }
  }

  template <class T>
  static T lift(double x) {
    if constexpr (std::is_same_v<T, double>) {
      return x;
    } else {
      return T::constant(x);
    }
  }

  template <class T>
  T eval_node(std::size_t id, std::span<const T> args) const {
    using std::cos, std::exp, std::log, std::pow, std::sin, std::sqrt;
    const Node& n = nodes_[id];
    switch (n.op) {
      case Op::constant: return lift<T>(n.constant);
      case Op::variable: return args[n.variable];
      case Op::neg: return -eval_node<T>(n.lhs, args);
      case Op::sin: return sin(eval_node<T>(n.lhs, args));
      case Op::cos: return cos(eval_node<T>(n.lhs, args));
      case Op::exp: return exp(eval_node<T>(n.lhs, args));
      case Op::log: {
        const T x = eval_node<T>(n.lhs, args);
        if (!(value_of(x) > 0.0)) throw DomainError("log of non-positive value");
        return log(x);
      }
      case Op::sqrt: {
        const T x = eval_node<T>(n.lhs, args);
        if (value_of(x) < 0.0) throw DomainError("sqrt of negative value");
        return sqrt(x);
      }
      case Op::add: return eval_node<T>(n.lhs, args) + eval_node<T>(n.rhs, args);
      case Op::sub: return eval_node<T>(n.lhs, args) - eval_node<T>(n.rhs, args);
      case Op::mul: return eval_node<T>(n.lhs, args) * eval_node<T>(n.rhs, args);
      case Op::div: {
        const T num = eval_node<T>(n.lhs, args);
        const T den = eval_node<T>(n.rhs, args);
        if (value_of(den) == 0.0) throw DomainError("division by zero");
        return num / den;
      }
      case Op::pow: {
        const T base = eval_node<T>(n.lhs, args);
        const T expo = eval_node<T>(n.rhs, args);
        const double b = value_of(base);
        const double e = value_of(expo);
        if (b < 0.0 && std::trunc(e) != e) {
          throw DomainError("negative base raised to a non-integer power");
        }
        if constexpr (!std::is_same_v<T, double>) {
          if (b <= 0.0 && !expo.is_constant()) {
            throw DomainError("non-positive base raised to a varying power");
          }
        }
        return pow(base, expo);
      }
    }
    throw DomainError("corrupt expression node");
  }

  std::string print(std::size_t id) const;

  friend class ExpressionParser;

  std::vector<std::string> variables_;
  std::vector<Node> nodes_;
  std::size_t root_ = 0;
};

namespace detail {

inline std::string format_shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace detail

/// Recursive-descent parser behind Expression::parse.
class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, std::vector<std::string> variables) : text_(text) {
    out_.variables_ = std::move(variables);
  }

  Expression run() {
    advance();
    out_.root_ = parse_expr();
    if (tok_.kind != Tok::end) fail("unexpected '" + std::string(tok_.text) + "'");
    return std::move(out_);
  }

 private:
  enum class Tok { number, name, plus, minus, star, slash, caret, lparen, rparen, end };

  struct Token {
    Tok kind = Tok::end;
    std::string_view text;
    std::size_t begin = 0;
    std::size_t end = 0;
    double number = 0.0;
  };

  using Op = Expression::Op;

  [[noreturn]] void fail(const std::string& detail) const { throw ParseError(detail, tok_.end); }

  static bool is_name_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  void advance() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                   text_[pos_] == '\n' || text_[pos_] == '\r')) {
      ++pos_;
    }
    tok_ = Token{};
    tok_.begin = pos_;
    if (pos_ >= text_.size()) {
      tok_.kind = Tok::end;
      tok_.end = pos_;
      return;
    }
    const char c = text_[pos_];
    if (is_digit(c) || (c == '.' && pos_ + 1 < text_.size() && is_digit(text_[pos_ + 1]))) {
      std::size_t p = pos_;
      while (p < text_.size() && is_digit(text_[p])) ++p;
      if (p < text_.size() && text_[p] == '.') {
        ++p;
        while (p < text_.size() && is_digit(text_[p])) ++p;
      }
      if (p < text_.size() && (text_[p] == 'e' || text_[p] == 'E')) {
        std::size_t q = p + 1;
        if (q < text_.size() && (text_[q] == '+' || text_[q] == '-')) ++q;
        if (q < text_.size() && is_digit(text_[q])) {
          while (q < text_.size() && is_digit(text_[q])) ++q;
          p = q;
        }
      }
      tok_.kind = Tok::number;
      tok_.text = text_.substr(pos_, p - pos_);
      tok_.end = p;
      const auto res = std::from_chars(tok_.text.data(), tok_.text.data() + tok_.text.size(),
                                       tok_.number);
      if (res.ec != std::errc{} || !std::isfinite(tok_.number)) fail("bad number literal");
      pos_ = p;
      return;
    }
    if (is_name_start(c)) {
      std::size_t p = pos_;
      while (p < text_.size() && (is_name_start(text_[p]) || is_digit(text_[p]))) ++p;
      tok_.kind = Tok::name;
      tok_.text = text_.substr(pos_, p - pos_);
      tok_.end = p;
      pos_ = p;
      return;
    }
    tok_.text = text_.substr(pos_, 1);
    tok_.end = pos_ + 1;
    switch (c) {
      case '+': tok_.kind = Tok::plus; break;
      case '-': tok_.kind = Tok::minus; break;
      case '*': tok_.kind = Tok::star; break;
      case '/': tok_.kind = Tok::slash; break;
      case '^': tok_.kind = Tok::caret; break;
      case '(': tok_.kind = Tok::lparen; break;
      case ')': tok_.kind = Tok::rparen; break;
      default: fail("unexpected character '" + std::string(1, c) + "'");
    }
    ++pos_;
  }

  std::size_t add(Expression::Node node) {
    out_.nodes_.push_back(node);
    return out_.nodes_.size() - 1;
  }

  std::size_t binary(Op op, std::size_t lhs, std::size_t rhs) {
    return add({op, 0.0, 0, lhs, rhs});
  }

  std::size_t parse_expr() {
    std::size_t lhs = parse_term();
    while (tok_.kind == Tok::plus || tok_.kind == Tok::minus) {
      const Op op = tok_.kind == Tok::plus ? Op::add : Op::sub;
      advance();
      lhs = binary(op, lhs, parse_term());
    }
    return lhs;
  }

  std::size_t parse_term() {
    std::size_t lhs = parse_unary();
    while (tok_.kind == Tok::star || tok_.kind == Tok::slash) {
      const Op op = tok_.kind == Tok::star ? Op::mul : Op::div;
      advance();
      lhs = binary(op, lhs, parse_unary());
    }
    return lhs;
  }

  std::size_t parse_unary() {
    if (tok_.kind == Tok::minus) {
      advance();
      return add({Op::neg, 0.0, 0, parse_unary(), 0});
    }
    return parse_power();
  }

  std::size_t parse_power() {
    const std::size_t base = parse_primary();
    if (tok_.kind == Tok::caret) {
      advance();
      return binary(Op::pow, base, parse_unary());
    }
    return base;
  }

  void expect(Tok kind, const char* what) {
    if (tok_.kind != kind) fail(std::string("expected ") + what);
    advance();
  }

  static bool function_op(std::string_view name, Op& op) {
    static constexpr std::pair<std::string_view, Op> table[] = {
        {"sin", Op::sin}, {"cos", Op::cos}, {"exp", Op::exp}, {"log", Op::log}, {"sqrt", Op::sqrt}};
    for (const auto& [n, o] : table) {
      if (n == name) {
        op = o;
        return true;
      }
    }
    return false;
  }

  std::size_t parse_primary() {
    switch (tok_.kind) {
      case Tok::number: {
        const double value = tok_.number;
        advance();
        return add({Op::constant, value, 0, 0, 0});
      }
      case Tok::lparen: {
        advance();
        const std::size_t inner = parse_expr();
        expect(Tok::rparen, "')'");
        return inner;
      }
      case Tok::name: {
        const std::string_view name = tok_.text;
        for (std::size_t k = 0; k < out_.variables_.size(); ++k) {
          if (out_.variables_[k] == name) {
            advance();
            return add({Op::variable, 0.0, k, 0, 0});
          }
        }
        Op op{};
        if (!function_op(name, op)) fail("unknown identifier '" + std::string(name) + "'");
        advance();
        expect(Tok::lparen, "'(' after function name");
        const std::size_t arg = parse_expr();
        expect(Tok::rparen, "')'");
        return add({op, 0.0, 0, arg, 0});
      }
      case Tok::end: fail("unexpected end of input");
      default: fail("unexpected '" + std::string(tok_.text) + "'");
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token tok_;
  Expression out_;
};

inline Expression Expression::parse(std::string_view text, std::vector<std::string> variables) {
  return ExpressionParser(text, std::move(variables)).run();
}

inline std::string Expression::print(std::size_t id) const {
  const Node& n = nodes_[id];
  auto unary = [&](const char* name) { return std::string(name) + "(" + print(n.lhs) + ")"; };
  auto infix = [&](const char* op) {
    return "(" + print(n.lhs) + " " + op + " " + print(n.rhs) + ")";
  };
  switch (n.op) {
    case Op::constant: return detail::format_shortest(n.constant);
    case Op::variable: return variables_[n.variable];
    case Op::neg: return "(-" + print(n.lhs) + ")";
    case Op::sin: return unary("sin");
    case Op::cos: return unary("cos");
    case Op::exp: return unary("exp");
    case Op::log: return unary("log");
    case Op::sqrt: return unary("sqrt");
    case Op::add: return infix("+");
    case Op::sub: return infix("-");
    case Op::mul: return infix("*");
    case Op::div: return infix("/");
    case Op::pow: return infix("^");
  }
  return "?";
}

}  // namespace tsvar
