#include "afem/predicate.hpp"

#include <cctype>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "afem/error.hpp"

namespace afem {
namespace expr {

/* Grammar:
 *   or      := and { ('|' | '||') and }
 *   and     := cmp { ('&' | '&&') cmp }
 *   cmp     := sum [ ('==' | '<=' | '>=' | '<' | '>') sum ]
 *   sum     := term { ('+' | '-') term }
 *   term    := unary { ('*' | '/') unary }
 *   unary   := ('-' | '+') unary | primary
 *   primary := number | 'x' | 'y' | '(' or ')'
 * Comparisons yield booleans, everything else numbers; & and | require
 * boolean operands, the arithmetic operators numeric ones.
 */

enum class Op {
  number,
  var_x,
  var_y,
  add,
  sub,
  mul,
  div,
  neg,
  eq,
  lt,
  gt,
  le,
  ge,
  logic_and,
  logic_or,
};

struct Node {
  Op op = Op::number;
  double value = 0.0;
  std::shared_ptr<const Node> lhs, rhs;

  bool is_boolean() const {
    switch (op) {
      case Op::eq:
      case Op::lt:
      case Op::gt:
      case Op::le:
      case Op::ge:
      case Op::logic_and:
      case Op::logic_or:
        return true;
      default:
        return false;
    }
  }
};

namespace {

constexpr double kEqRelTol = 1e-9;

using NodePtr = std::shared_ptr<const Node>;

NodePtr leaf(Op op, double value = 0.0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->value = value;
  return n;
}

NodePtr inner(Op op, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

double eval_number(const Node& n, double x, double y);

bool eval_boolean(const Node& n, double x, double y) {
  switch (n.op) {
    case Op::eq: {
      const double lhs = eval_number(*n.lhs, x, y);
      const double rhs = eval_number(*n.rhs, x, y);
      return std::abs(lhs - rhs) <= kEqRelTol * std::max(1.0, std::abs(rhs));
    }
    case Op::lt:
      return eval_number(*n.lhs, x, y) < eval_number(*n.rhs, x, y);
    case Op::gt:
      return eval_number(*n.lhs, x, y) > eval_number(*n.rhs, x, y);
    case Op::le:
      return eval_number(*n.lhs, x, y) <= eval_number(*n.rhs, x, y);
    case Op::ge:
      return eval_number(*n.lhs, x, y) >= eval_number(*n.rhs, x, y);
    case Op::logic_and:
      return eval_boolean(*n.lhs, x, y) && eval_boolean(*n.rhs, x, y);
    case Op::logic_or:
      return eval_boolean(*n.lhs, x, y) || eval_boolean(*n.rhs, x, y);
    default:
      throw Error("predicate: expression is not boolean");
  }
}

double eval_number(const Node& n, double x, double y) {
  switch (n.op) {
    case Op::number:
      return n.value;
    case Op::var_x:
      return x;
    case Op::var_y:
      return y;
    case Op::add:
      return eval_number(*n.lhs, x, y) + eval_number(*n.rhs, x, y);
    case Op::sub:
      return eval_number(*n.lhs, x, y) - eval_number(*n.rhs, x, y);
    case Op::mul:
      return eval_number(*n.lhs, x, y) * eval_number(*n.rhs, x, y);
    case Op::div: {
      const double d = eval_number(*n.rhs, x, y);
      if (d == 0.0) throw Error("expression: division by zero");
      return eval_number(*n.lhs, x, y) / d;
    }
    case Op::neg:
      return -eval_number(*n.lhs, x, y);
    default:
      throw Error("expression: boolean where a number was expected");
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse_or() {
    NodePtr lhs = parse_and();
    while (true) {
      const std::size_t at = pos_;
      if (accept("||") || accept("|")) {
        NodePtr rhs = parse_and();
        require_boolean(lhs, at);
        require_boolean(rhs, at);
        lhs = inner(Op::logic_or, std::move(lhs), std::move(rhs));
      } else {
        return lhs;
      }
    }
  }

  void expect_end() {
    skip_space();
    if (pos_ != text_.size()) {
      throw ParseError("unexpected character '" + std::string(1, text_[pos_]) +
                           "'",
                       pos_);
    }
  }

 private:
  NodePtr parse_and() {
    NodePtr lhs = parse_cmp();
    while (true) {
      const std::size_t at = pos_;
      if (accept("&&") || accept("&")) {
        NodePtr rhs = parse_cmp();
        require_boolean(lhs, at);
        require_boolean(rhs, at);
        lhs = inner(Op::logic_and, std::move(lhs), std::move(rhs));
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_cmp() {
    NodePtr lhs = parse_sum();
    const std::size_t at = pos_;
    Op op;
    if (accept("==")) {
      op = Op::eq;
    } else if (accept("<=")) {
      op = Op::le;
    } else if (accept(">=")) {
      op = Op::ge;
    } else if (accept("<")) {
      op = Op::lt;
    } else if (accept(">")) {
      op = Op::gt;
    } else {
      return lhs;
    }
    NodePtr rhs = parse_sum();
    require_numeric(lhs, at);
    require_numeric(rhs, at);
    return inner(op, std::move(lhs), std::move(rhs));
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_term();
    while (true) {
      const std::size_t at = pos_;
      if (accept("+")) {
        NodePtr rhs = parse_term();
        require_numeric(lhs, at);
        require_numeric(rhs, at);
        lhs = inner(Op::add, std::move(lhs), std::move(rhs));
      } else if (accept("-")) {
        NodePtr rhs = parse_term();
        require_numeric(lhs, at);
        require_numeric(rhs, at);
        lhs = inner(Op::sub, std::move(lhs), std::move(rhs));
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    while (true) {
      const std::size_t at = pos_;
      if (accept("*")) {
        NodePtr rhs = parse_unary();
        require_numeric(lhs, at);
        require_numeric(rhs, at);
        lhs = inner(Op::mul, std::move(lhs), std::move(rhs));
      } else if (accept("/")) {
        NodePtr rhs = parse_unary();
        require_numeric(lhs, at);
        require_numeric(rhs, at);
        lhs = inner(Op::div, std::move(lhs), std::move(rhs));
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    skip_space();
    const std::size_t at = pos_;
    if (accept("-")) {
      NodePtr operand = parse_unary();
      require_numeric(operand, at);
      return inner(Op::neg, std::move(operand), nullptr);
    }
    if (accept("+")) {
      NodePtr operand = parse_unary();
      require_numeric(operand, at);
      return operand;
    }
    return parse_primary();
  }

  NodePtr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) {
      throw ParseError("unexpected end of expression", pos_);
    }
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inside = parse_or();
      skip_space();
      if (!accept(")")) {
        throw ParseError("missing ')'", pos_);
      }
      return inside;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return parse_number();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string name(text_.substr(start, pos_ - start));
      if (name == "x") return leaf(Op::var_x);
      if (name == "y") return leaf(Op::var_y);
      throw ParseError("unknown identifier '" + name + "'", start);
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    bool seen_dot = false;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '.' && !seen_dot) {
        seen_dot = true;
        ++pos_;
      } else {
        break;
      }
    }
    if (pos_ == start || (pos_ == start + 1 && text_[start] == '.')) {
      throw ParseError("malformed number", start);
    }
    // Optional exponent, only when followed by digits.
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t probe = pos_ + 1;
      if (probe < text_.size() && (text_[probe] == '+' || text_[probe] == '-')) {
        ++probe;
      }
      if (probe < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[probe]))) {
        pos_ = probe;
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          ++pos_;
        }
      }
    }
    const std::string token(text_.substr(start, pos_ - start));
    return leaf(Op::number, std::stod(token));
  }

  // Two-character operators are always tried before their one-character
  // prefixes, so plain prefix matching is enough.
  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  void require_boolean(const NodePtr& n, std::size_t at) const {
    if (!n->is_boolean()) {
      throw ParseError("operand of &/| must be a comparison", at);
    }
  }
  void require_numeric(const NodePtr& n, std::size_t at) const {
    if (n->is_boolean()) {
      throw ParseError("comparison used where a number was expected", at);
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

NodePtr parse_tree(std::string_view text) {
  Parser parser(text);
  NodePtr root = parser.parse_or();
  parser.expect_end();
  return root;
}

}  // namespace
}  // namespace expr

ScalarExpression::ScalarExpression(std::shared_ptr<const expr::Node> root)
    : root_(std::move(root)) {}

ScalarExpression ScalarExpression::parse(std::string_view text) {
  auto root = expr::parse_tree(text);
  if (root->is_boolean()) {
    throw ParseError("expected an arithmetic expression, got a comparison", 0);
  }
  return ScalarExpression(std::move(root));
}

double ScalarExpression::eval(double x, double y) const {
  return expr::eval_number(*root_, x, y);
}

BoundaryPredicate::BoundaryPredicate(std::shared_ptr<const expr::Node> root)
    : root_(std::move(root)) {}

BoundaryPredicate BoundaryPredicate::parse(std::string_view text) {
  if (text.empty()) {
    throw ParseError("empty predicate", 0);
  }
  auto root = expr::parse_tree(text);
  if (!root->is_boolean()) {
    throw ParseError("predicate must contain a comparison", 0);
  }
  return BoundaryPredicate(std::move(root));
}

bool BoundaryPredicate::eval(double x, double y) const {
  return expr::eval_boolean(*root_, x, y);
}

}  // namespace afem
