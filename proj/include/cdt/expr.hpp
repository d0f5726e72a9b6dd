#pragma once

// Tiny expression language for analytic field bodies:
//   expr   := term (("+" | "-") term)*
//   term   := factor (("*" | "/") factor)*
//   factor := atom ("^" uint)?
//   atom   := number | "x" uint | "exp" "(" expr ")" | "(" expr ")" | "-" atom
// Unary minus applies to an atom, so "-x1^2" is (-x1)^2.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cdt/errors.hpp"

namespace cdt {

enum class ExprKind { Constant, Coordinate, Add, Sub, Mul, Div, Pow, Exp, Neg };

inline constexpr int kMaxExprDepth = 64;

struct Expr {
  ExprKind kind = ExprKind::Constant;
  double value = 0.0;  // Constant
  int index = 0;       // 1-based coordinate, or the Pow exponent
  int depth = 1;
  std::vector<Expr> children;

  static Expr constant(double v);
  static Expr coordinate(int j);
  static Expr unary(ExprKind k, Expr a);
  static Expr binary(ExprKind k, Expr a, Expr b);
  static Expr power(Expr a, int n);

  friend bool operator==(const Expr&, const Expr&) = default;
};

Expr parse_expr(std::string_view text, int dim);
// Throws NonFiniteResult on division by zero or any non-finite value.
double eval_expr(const Expr& e, std::span<const double> x);
// Fully parenthesized; parse_expr(print_expr(e)) == e for trees whose
// constants are finite and non-negative.
std::string print_expr(const Expr& e);

}  // namespace cdt
