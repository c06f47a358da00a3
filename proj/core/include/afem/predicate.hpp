#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace afem {

namespace expr {
struct Node;
}

// Arithmetic expression in the variables x and y: numeric literals, + - * /,
// unary minus, parentheses. Division by zero at evaluation time throws.
class ScalarExpression {
 public:
  static ScalarExpression parse(std::string_view text);
  double eval(double x, double y) const;
  double operator()(double x, double y) const { return eval(x, y); }

 private:
  explicit ScalarExpression(std::shared_ptr<const expr::Node> root);
  std::shared_ptr<const expr::Node> root_;
};

// Boundary predicate: comparisons (==, <, >, <=, >=) of arithmetic
// expressions, combined with & and | (&& and || are accepted too).
// Equality holds within |lhs - rhs| <= 1e-9 * max(1, |rhs|), so "x==1"
// tolerates midpoints computed in floating point.
class BoundaryPredicate {
 public:
  static BoundaryPredicate parse(std::string_view text);
  bool eval(double x, double y) const;
  bool operator()(double x, double y) const { return eval(x, y); }

 private:
  explicit BoundaryPredicate(std::shared_ptr<const expr::Node> root);
  std::shared_ptr<const expr::Node> root_;
};

inline BoundaryPredicate parse_boundary_predicate(std::string_view text) {
  return BoundaryPredicate::parse(text);
}

}  // namespace afem
