#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>

#include "prwave/field.hpp"

namespace prwave {

// Expression language over the chart variables u, v, x, y and named real
// parameters. Grammar (whitespace-insensitive, ASCII identifiers):
//
//   expr    := term (('+' | '-') term)*
//   term    := factor (('*' | '/') factor)*
//   factor  := '-' factor | power
//   power   := atom ('^' exponent)*            exponent := ['-'] number
//   atom    := number | ident | fn '(' expr ')' | '(' expr ')'
//
// '^' binds tighter than unary minus and requires a literal exponent.
// Juxtaposition is not multiplication: "2v" is a parse error.

enum class BinaryOp { Add, Sub, Mul, Div };
enum class FnKind { Exp, Log, Sin, Cos, Sinh, Cosh, Sqrt };

struct ExprNode;
using ExprNodePtr = std::shared_ptr<const ExprNode>;

struct NumberNode {
  double value;
};
struct VariableNode {
  int axis;  // kAxisU..kAxisY
};
struct ParamNode {
  std::string name;
};
struct NegNode {
  ExprNodePtr operand;
};
struct BinaryNode {
  BinaryOp op;
  ExprNodePtr lhs, rhs;
};
struct PowNode {
  ExprNodePtr base;
  double exponent;
};
struct CallNode {
  FnKind fn;
  ExprNodePtr arg;
};

struct ExprNode {
  std::variant<NumberNode, VariableNode, ParamNode, NegNode, BinaryNode, PowNode,
               CallNode>
      v;
};

using ParamTable = std::map<std::string, double>;

class ExprAst {
 public:
  /// Parses `text`; throws ParseError with a byte offset on failure.
  static ExprAst parse(std::string_view text);

  const ExprNodePtr& root() const { return root_; }
  const std::string& text() const { return text_; }
  const std::set<std::string>& parameters() const { return params_; }
  const Deps& variables() const { return vars_; }

  int node_count() const;
  int depth() const;
  std::string pretty() const;

 private:
  ExprNodePtr root_;
  std::string text_;
  std::set<std::string> params_;
  Deps vars_{false, false, false, false};
};

bool structurally_equal(const ExprAst& a, const ExprAst& b);
bool structurally_equal(const ExprNodePtr& a, const ExprNodePtr& b);

/// Substitutes parameters and wraps the tree as a jet-evaluated field.
/// Throws MissingParameterError listing every unresolved name.
ScalarField bind(const ExprAst& ast, const ParamTable& params = {});

/// Binds an expression in v alone as a Profile (order-6 series evaluation).
/// Rejects expressions mentioning u, x or y.
Profile bind_profile(const ExprAst& ast, const ParamTable& params = {});

/// Direct double-recursion evaluation (no jets); used by value paths.
double eval_double(const ExprNodePtr& node, const ParamTable& params, const Point& p);

}  // namespace prwave
