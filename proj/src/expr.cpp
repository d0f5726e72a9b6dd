#include "cdt/expr.hpp"

#include <charconv>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace cdt {

namespace {

void check_depth(int depth) {
  if (depth > kMaxExprDepth) {
    throw Error(ErrorCode::DepthExceeded, "expression deeper than " + std::to_string(kMaxExprDepth));
  }
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Parser {
 public:
  Parser(std::string_view text, int dim) : s_(text), dim_(dim) {}

  Expr parse() {
    skip();
    if (pos_ == s_.size()) fail("empty expression");
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::SyntaxError, why + " at byte " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r')) ++pos_;
  }

  // ASCII '-' or U+2212.
  bool take_minus() {
    skip();
    if (pos_ < s_.size() && s_[pos_] == '-') {
      ++pos_;
      return true;
    }
    if (s_.substr(pos_, 3) == "\xE2\x88\x92") {
      pos_ += 3;
      return true;
    }
    return false;
  }

  bool take(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  // Bounds recursion. A printed tree nests at most two levels per node
  // ("(-" for negation), so twice the tree limit never rejects a valid tree.
  void enter() {
    if (++nesting_ > 2 * kMaxExprDepth) {
      throw Error(ErrorCode::DepthExceeded,
                  "nesting deeper than " + std::to_string(kMaxExprDepth) + " at byte " + std::to_string(pos_));
    }
  }
  void leave() { --nesting_; }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (take('+')) {
        lhs = Expr::binary(ExprKind::Add, std::move(lhs), term());
      } else if (take_minus()) {
        lhs = Expr::binary(ExprKind::Sub, std::move(lhs), term());
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = factor();
    for (;;) {
      if (take('*')) {
        lhs = Expr::binary(ExprKind::Mul, std::move(lhs), factor());
      } else if (take('/')) {
        lhs = Expr::binary(ExprKind::Div, std::move(lhs), factor());
      } else {
        return lhs;
      }
    }
  }

  Expr factor() {
    Expr base = atom();
    if (take('^')) {
      skip();
      const std::size_t start = pos_;
      unsigned long long n = uint_literal();
      if (n > static_cast<unsigned long long>(std::numeric_limits<int>::max())) {
        pos_ = start;
        fail("exponent too large");
      }
      return Expr::power(std::move(base), static_cast<int>(n));
    }
    return base;
  }

  unsigned long long uint_literal() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_;
    if (pos_ == start) fail("expected unsigned integer");
    unsigned long long v = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (ec != std::errc()) {
      pos_ = start;
      fail("integer out of range");
    }
    return v;
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_;
    bool digits = pos_ > start;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      const std::size_t frac = pos_;
      while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_;
      digits = digits || pos_ > frac;
    }
    if (!digits) {
      pos_ = start;
      fail("malformed number");
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
      if (q < s_.size() && is_digit(s_[q])) {
        pos_ = q;
        while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_;
      }
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (ec != std::errc() || ptr != s_.data() + pos_ || !std::isfinite(v)) {
      pos_ = start;
      fail("number out of range");
    }
    return Expr::constant(v);
  }

  Expr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (take_minus()) {
      enter();
      Expr e = Expr::unary(ExprKind::Neg, atom());
      leave();
      return e;
    }
    if (is_digit(c) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      enter();
      Expr e = expr();
      leave();
      if (!take(')')) fail("expected ')'");
      return e;
    }
    if (c == 'x') {
      const std::size_t start = pos_;
      ++pos_;
      unsigned long long j = uint_literal();
      if (j < 1 || j > static_cast<unsigned long long>(dim_)) {
        throw Error(ErrorCode::UnknownCoordinate, "coordinate '" + std::string(s_.substr(start, pos_ - start)) +
                                                      "' at byte " + std::to_string(start) + " (dimension " +
                                                      std::to_string(dim_) + ")");
      }
      return Expr::coordinate(static_cast<int>(j));
    }
    if (s_.substr(pos_, 3) == "exp") {
      pos_ += 3;
      if (!take('(')) fail("expected '(' after exp");
      enter();
      Expr e = Expr::unary(ExprKind::Exp, expr());
      leave();
      if (!take(')')) fail("expected ')'");
      return e;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  int dim_;
  std::size_t pos_ = 0;
  int nesting_ = 0;
};

double finite(double v, const char* what) {
  if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteResult, std::string(what) + " produced a non-finite value");
  return v;
}

}  // namespace

Expr Expr::constant(double v) {
  Expr e;
  e.kind = ExprKind::Constant;
  e.value = v;
  return e;
}

Expr Expr::coordinate(int j) {
  Expr e;
  e.kind = ExprKind::Coordinate;
  e.index = j;
  return e;
}

Expr Expr::unary(ExprKind k, Expr a) {
  Expr e;
  e.kind = k;
  e.depth = a.depth + 1;
  check_depth(e.depth);
  e.children.push_back(std::move(a));
  return e;
}

Expr Expr::binary(ExprKind k, Expr a, Expr b) {
  Expr e;
  e.kind = k;
  e.depth = std::max(a.depth, b.depth) + 1;
  check_depth(e.depth);
  e.children.push_back(std::move(a));
  e.children.push_back(std::move(b));
  return e;
}

Expr Expr::power(Expr a, int n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "negative exponent");
  Expr e = unary(ExprKind::Pow, std::move(a));
  e.index = n;
  return e;
}

Expr parse_expr(std::string_view text, int dim) { return Parser(text, dim).parse(); }

double eval_expr(const Expr& e, std::span<const double> x) {
  switch (e.kind) {
    case ExprKind::Constant:
      return e.value;
    case ExprKind::Coordinate:
      if (e.index < 1 || e.index > static_cast<int>(x.size())) {
        throw Error(ErrorCode::UnknownCoordinate, "x" + std::to_string(e.index) + " not available");
      }
      return finite(x[e.index - 1], "coordinate");
    case ExprKind::Add:
      return finite(eval_expr(e.children[0], x) + eval_expr(e.children[1], x), "addition");
    case ExprKind::Sub:
      return finite(eval_expr(e.children[0], x) - eval_expr(e.children[1], x), "subtraction");
    case ExprKind::Mul:
      return finite(eval_expr(e.children[0], x) * eval_expr(e.children[1], x), "multiplication");
    case ExprKind::Div: {
      const double num = eval_expr(e.children[0], x);
      const double den = eval_expr(e.children[1], x);
      if (den == 0.0) throw Error(ErrorCode::NonFiniteResult, "division by zero");
      return finite(num / den, "division");
    }
    case ExprKind::Pow:
      return finite(std::pow(eval_expr(e.children[0], x), static_cast<double>(e.index)), "power");
    case ExprKind::Exp:
      return finite(std::exp(eval_expr(e.children[0], x)), "exp");
    case ExprKind::Neg:
      return -eval_expr(e.children[0], x);
  }
  throw Error(ErrorCode::InvalidArgument, "corrupt expression node");
}

std::string print_expr(const Expr& e) {
  auto bin = [&](const char* op) {
    return "(" + print_expr(e.children[0]) + " " + op + " " + print_expr(e.children[1]) + ")";
  };
  switch (e.kind) {
    case ExprKind::Constant: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", e.value);
      return buf;
    }
    case ExprKind::Coordinate:
      return "x" + std::to_string(e.index);
    case ExprKind::Add: return bin("+");
    case ExprKind::Sub: return bin("-");
    case ExprKind::Mul: return bin("*");
    case ExprKind::Div: return bin("/");
    case ExprKind::Pow:
      return "(" + print_expr(e.children[0]) + "^" + std::to_string(e.index) + ")";
    case ExprKind::Exp:
      return "exp(" + print_expr(e.children[0]) + ")";
    case ExprKind::Neg:
      return "(-" + print_expr(e.children[0]) + ")";
  }
  return {};
}

}  // namespace cdt
