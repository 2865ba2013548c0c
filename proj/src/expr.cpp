#include "prwave/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

namespace prwave {

namespace {

const std::map<std::string_view, FnKind> kFunctions = {
    {"exp", FnKind::Exp},   {"log", FnKind::Log},   {"sin", FnKind::Sin},
    {"cos", FnKind::Cos},   {"sinh", FnKind::Sinh}, {"cosh", FnKind::Cosh},
    {"sqrt", FnKind::Sqrt}};

const char* fn_name(FnKind fn) {
  switch (fn) {
    case FnKind::Exp:
      return "exp";
    case FnKind::Log:
      return "log";
    case FnKind::Sin:
      return "sin";
    case FnKind::Cos:
      return "cos";
    case FnKind::Sinh:
      return "sinh";
    case FnKind::Cosh:
      return "cosh";
    case FnKind::Sqrt:
      return "sqrt";
  }
  return "?";
}

int axis_of(std::string_view ident) {
  if (ident.size() != 1) return -1;
  switch (ident[0]) {
    case 'u':
      return kAxisU;
    case 'v':
      return kAxisV;
    case 'x':
      return kAxisX;
    case 'y':
      return kAxisY;
    default:
      return -1;
  }
}

struct Token {
  enum class Kind { Number, Ident, Op, LParen, RParen, End };
  Kind kind;
  std::size_t offset;
  std::string_view text;
  double number = 0.0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
    if (pos_ >= src_.size()) return {Token::Kind::End, src_.size(), {}};
    const std::size_t start = pos_;
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      return lex_number(start);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      return {Token::Kind::Ident, start, src_.substr(start, pos_ - start)};
    }
    ++pos_;
    switch (c) {
      case '+':
      case '-':
      case '*':
      case '/':
      case '^':
        return {Token::Kind::Op, start, src_.substr(start, 1)};
      case '(':
        return {Token::Kind::LParen, start, src_.substr(start, 1)};
      case ')':
        return {Token::Kind::RParen, start, src_.substr(start, 1)};
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
  }

 private:
  Token lex_number(std::size_t start) {
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
          ++pos_;
      } else {
        pos_ = mark;  // trailing 'e' belongs to an identifier, not this number
      }
    }
    const std::string_view text = src_.substr(start, pos_ - start);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
      throw ParseError("malformed number literal", start);
    return {Token::Kind::Number, start, text, value};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { advance(); }

  ExprNodePtr parse_all() {
    ExprNodePtr e = parse_expr();
    if (cur_.kind != Token::Kind::End)
      throw ParseError("unexpected trailing input", cur_.offset,
                       {"operator", "end of input"});
    return e;
  }

 private:
  void advance() { cur_ = lexer_.next(); }

  bool is_op(const char* text) const {
    return cur_.kind == Token::Kind::Op && cur_.text == text;
  }

  ExprNodePtr parse_expr() {
    ExprNodePtr lhs = parse_term();
    while (is_op("+") || is_op("-")) {
      const BinaryOp op = is_op("+") ? BinaryOp::Add : BinaryOp::Sub;
      advance();
      ExprNodePtr rhs = parse_term();
      lhs = std::make_shared<const ExprNode>(ExprNode{BinaryNode{op, lhs, rhs}});
    }
    return lhs;
  }

  ExprNodePtr parse_term() {
    ExprNodePtr lhs = parse_factor();
    while (is_op("*") || is_op("/")) {
      const BinaryOp op = is_op("*") ? BinaryOp::Mul : BinaryOp::Div;
      advance();
      ExprNodePtr rhs = parse_factor();
      lhs = std::make_shared<const ExprNode>(ExprNode{BinaryNode{op, lhs, rhs}});
    }
    return lhs;
  }

  ExprNodePtr parse_factor() {
    if (is_op("-")) {
      advance();
      ExprNodePtr operand = parse_factor();
      return std::make_shared<const ExprNode>(ExprNode{NegNode{operand}});
    }
    return parse_power();
  }

  ExprNodePtr parse_power() {
    ExprNodePtr base = parse_atom();
    while (is_op("^")) {
      advance();
      double sign = 1.0;
      if (is_op("-")) {
        sign = -1.0;
        advance();
      }
      if (cur_.kind != Token::Kind::Number)
        throw ParseError("exponent must be a number literal", cur_.offset,
                         {"number"});
      const double exponent = sign * cur_.number;
      advance();
      base = std::make_shared<const ExprNode>(ExprNode{PowNode{base, exponent}});
    }
    return base;
  }

  ExprNodePtr parse_atom() {
    switch (cur_.kind) {
      case Token::Kind::Number: {
        const double value = cur_.number;
        advance();
        return std::make_shared<const ExprNode>(ExprNode{NumberNode{value}});
      }
      case Token::Kind::Ident: {
        const std::string name(cur_.text);
        const std::size_t offset = cur_.offset;
        advance();
        if (cur_.kind == Token::Kind::LParen) {
          auto it = kFunctions.find(name);
          if (it == kFunctions.end())
            throw ParseError("unknown function '" + name + "'", offset,
                             {"exp", "log", "sin", "cos", "sinh", "cosh", "sqrt"});
          advance();
          ExprNodePtr arg = parse_expr();
          expect_rparen();
          return std::make_shared<const ExprNode>(ExprNode{CallNode{it->second, arg}});
        }
        const int axis = axis_of(name);
        if (axis >= 0)
          return std::make_shared<const ExprNode>(ExprNode{VariableNode{axis}});
        return std::make_shared<const ExprNode>(ExprNode{ParamNode{name}});
      }
      case Token::Kind::LParen: {
        advance();
        ExprNodePtr e = parse_expr();
        expect_rparen();
        return e;
      }
      default:
        throw ParseError("expected a value", cur_.offset,
                         {"number", "identifier", "("});
    }
  }

  void expect_rparen() {
    if (cur_.kind != Token::Kind::RParen)
      throw ParseError("expected ')'", cur_.offset, {")"});
    advance();
  }

  Lexer lexer_;
  Token cur_;
};

void collect(const ExprNodePtr& node, std::set<std::string>& params, Deps& vars) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, VariableNode>) {
          vars[n.axis] = true;
        } else if constexpr (std::is_same_v<T, ParamNode>) {
          params.insert(n.name);
        } else if constexpr (std::is_same_v<T, NegNode>) {
          collect(n.operand, params, vars);
        } else if constexpr (std::is_same_v<T, BinaryNode>) {
          collect(n.lhs, params, vars);
          collect(n.rhs, params, vars);
        } else if constexpr (std::is_same_v<T, PowNode>) {
          collect(n.base, params, vars);
        } else if constexpr (std::is_same_v<T, CallNode>) {
          collect(n.arg, params, vars);
        }
      },
      node->v);
}

int count_nodes(const ExprNodePtr& node) {
  int n = 1;
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, NegNode>) {
          n += count_nodes(t.operand);
        } else if constexpr (std::is_same_v<T, BinaryNode>) {
          n += count_nodes(t.lhs) + count_nodes(t.rhs);
        } else if constexpr (std::is_same_v<T, PowNode>) {
          n += count_nodes(t.base);
        } else if constexpr (std::is_same_v<T, CallNode>) {
          n += count_nodes(t.arg);
        }
      },
      node->v);
  return n;
}

int tree_depth(const ExprNodePtr& node) {
  int d = 0;
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, NegNode>) {
          d = tree_depth(t.operand);
        } else if constexpr (std::is_same_v<T, BinaryNode>) {
          d = std::max(tree_depth(t.lhs), tree_depth(t.rhs));
        } else if constexpr (std::is_same_v<T, PowNode>) {
          d = tree_depth(t.base);
        } else if constexpr (std::is_same_v<T, CallNode>) {
          d = tree_depth(t.arg);
        }
      },
      node->v);
  return d + 1;
}

void format_number(std::ostream& os, double value) {
  std::ostringstream tmp;
  tmp.precision(17);
  tmp << value;
  os << tmp.str();
}

int precedence_of(const ExprNode& node) {
  return std::visit(
      [](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, BinaryNode>) {
          return (n.op == BinaryOp::Add || n.op == BinaryOp::Sub) ? 1 : 2;
        } else if constexpr (std::is_same_v<T, NegNode>) {
          return 3;
        } else if constexpr (std::is_same_v<T, PowNode>) {
          return 4;
        } else {
          return 5;
        }
      },
      node.v);
}

void print_node(std::ostream& os, const ExprNodePtr& node, int parent_prec,
                bool rhs_of_nonassoc) {
  const int prec = precedence_of(*node);
  const bool parens = prec < parent_prec || (prec == parent_prec && rhs_of_nonassoc);
  if (parens) os << '(';
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, NumberNode>) {
          if (n.value < 0) {
            os << '(';
            format_number(os, n.value);
            os << ')';
          } else {
            format_number(os, n.value);
          }
        } else if constexpr (std::is_same_v<T, VariableNode>) {
          os << kAxisNames[n.axis];
        } else if constexpr (std::is_same_v<T, ParamNode>) {
          os << n.name;
        } else if constexpr (std::is_same_v<T, NegNode>) {
          os << '-';
          print_node(os, n.operand, 3, false);
        } else if constexpr (std::is_same_v<T, BinaryNode>) {
          const int p = (n.op == BinaryOp::Add || n.op == BinaryOp::Sub) ? 1 : 2;
          const char op_char[] = {'+', '-', '*', '/'};
          print_node(os, n.lhs, p, false);
          os << op_char[static_cast<int>(n.op)];
          print_node(os, n.rhs, p, n.op == BinaryOp::Sub || n.op == BinaryOp::Div);
        } else if constexpr (std::is_same_v<T, PowNode>) {
          print_node(os, n.base, 5, false);
          os << '^';
          if (n.exponent < 0) {
            os << '(';
            format_number(os, n.exponent);
            os << ')';
          } else {
            format_number(os, n.exponent);
          }
        } else if constexpr (std::is_same_v<T, CallNode>) {
          os << fn_name(n.fn) << '(';
          print_node(os, n.arg, 0, false);
          os << ')';
        }
      },
      node->v);
  if (parens) os << ')';
}

template <class J>
J eval_node(const ExprNodePtr& node, const ParamTable& params,
            std::span<const J, 4> vars) {
  return std::visit(
      [&](const auto& n) -> J {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, NumberNode>) {
          return J::constant(n.value);
        } else if constexpr (std::is_same_v<T, VariableNode>) {
          return vars[n.axis];
        } else if constexpr (std::is_same_v<T, ParamNode>) {
          return J::constant(params.at(n.name));
        } else if constexpr (std::is_same_v<T, NegNode>) {
          return -eval_node<J>(n.operand, params, vars);
        } else if constexpr (std::is_same_v<T, BinaryNode>) {
          const J lhs = eval_node<J>(n.lhs, params, vars);
          const J rhs = eval_node<J>(n.rhs, params, vars);
          switch (n.op) {
            case BinaryOp::Add:
              return lhs + rhs;
            case BinaryOp::Sub:
              return lhs - rhs;
            case BinaryOp::Mul:
              return lhs * rhs;
            case BinaryOp::Div:
              return lhs / rhs;
          }
          return J();
        } else if constexpr (std::is_same_v<T, PowNode>) {
          return pow(eval_node<J>(n.base, params, vars), n.exponent);
        } else {
          const J arg = eval_node<J>(n.arg, params, vars);
          switch (n.fn) {
            case FnKind::Exp:
              return exp(arg);
            case FnKind::Log:
              return log(arg);
            case FnKind::Sin:
              return sin(arg);
            case FnKind::Cos:
              return cos(arg);
            case FnKind::Sinh:
              return sinh(arg);
            case FnKind::Cosh:
              return cosh(arg);
            case FnKind::Sqrt:
              return sqrt(arg);
          }
          return J();
        }
      },
      node->v);
}

void check_params(const ExprAst& ast, const ParamTable& params) {
  std::vector<std::string> missing;
  for (const auto& name : ast.parameters())
    if (!params.count(name)) missing.push_back(name);
  if (!missing.empty()) {
    std::string msg = "unbound parameter(s):";
    for (const auto& m : missing) msg += " " + m;
    throw MissingParameterError(msg, std::move(missing));
  }
}

}  // namespace

ExprAst ExprAst::parse(std::string_view text) {
  ExprAst ast;
  ast.text_ = std::string(text);
  ast.root_ = Parser(text).parse_all();
  collect(ast.root_, ast.params_, ast.vars_);
  return ast;
}

int ExprAst::node_count() const { return count_nodes(root_); }

int ExprAst::depth() const { return tree_depth(root_); }

std::string ExprAst::pretty() const {
  std::ostringstream os;
  print_node(os, root_, 0, false);
  return os.str();
}

bool structurally_equal(const ExprNodePtr& a, const ExprNodePtr& b) {
  if (a->v.index() != b->v.index()) return false;
  return std::visit(
      [&](const auto& na) -> bool {
        using T = std::decay_t<decltype(na)>;
        const auto& nb = std::get<T>(b->v);
        if constexpr (std::is_same_v<T, NumberNode>) {
          return na.value == nb.value;
        } else if constexpr (std::is_same_v<T, VariableNode>) {
          return na.axis == nb.axis;
        } else if constexpr (std::is_same_v<T, ParamNode>) {
          return na.name == nb.name;
        } else if constexpr (std::is_same_v<T, NegNode>) {
          return structurally_equal(na.operand, nb.operand);
        } else if constexpr (std::is_same_v<T, BinaryNode>) {
          return na.op == nb.op && structurally_equal(na.lhs, nb.lhs) &&
                 structurally_equal(na.rhs, nb.rhs);
        } else if constexpr (std::is_same_v<T, PowNode>) {
          return na.exponent == nb.exponent && structurally_equal(na.base, nb.base);
        } else if constexpr (std::is_same_v<T, CallNode>) {
          return na.fn == nb.fn && structurally_equal(na.arg, nb.arg);
        }
      },
      a->v);
}

bool structurally_equal(const ExprAst& a, const ExprAst& b) {
  return structurally_equal(a.root(), b.root());
}

double eval_double(const ExprNodePtr& node, const ParamTable& params, const Point& p) {
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, NumberNode>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, VariableNode>) {
          return p[n.axis];
        } else if constexpr (std::is_same_v<T, ParamNode>) {
          return params.at(n.name);
        } else if constexpr (std::is_same_v<T, NegNode>) {
          return -eval_double(n.operand, params, p);
        } else if constexpr (std::is_same_v<T, BinaryNode>) {
          const double lhs = eval_double(n.lhs, params, p);
          const double rhs = eval_double(n.rhs, params, p);
          switch (n.op) {
            case BinaryOp::Add:
              return lhs + rhs;
            case BinaryOp::Sub:
              return lhs - rhs;
            case BinaryOp::Mul:
              return lhs * rhs;
            case BinaryOp::Div:
              if (rhs == 0.0) throw EvalDomainError("division by zero value");
              return lhs / rhs;
          }
          return 0.0;
        } else if constexpr (std::is_same_v<T, PowNode>) {
          const double base = eval_double(n.base, params, p);
          const double rounded = std::round(n.exponent);
          if (std::abs(n.exponent - rounded) < 1e-12) {
            if (base == 0.0 && rounded < 0)
              throw EvalDomainError("division by zero value");
            return std::pow(base, rounded);
          }
          if (!(base > 0.0))
            throw EvalDomainError("pow with non-integer exponent of nonpositive value");
          return std::pow(base, n.exponent);
        } else {
          const double arg = eval_double(n.arg, params, p);
          switch (n.fn) {
            case FnKind::Exp:
              return std::exp(arg);
            case FnKind::Log:
              if (!(arg > 0.0)) throw EvalDomainError("log of nonpositive value");
              return std::log(arg);
            case FnKind::Sin:
              return std::sin(arg);
            case FnKind::Cos:
              return std::cos(arg);
            case FnKind::Sinh:
              return std::sinh(arg);
            case FnKind::Cosh:
              return std::cosh(arg);
            case FnKind::Sqrt:
              if (!(arg > 0.0)) throw EvalDomainError("sqrt of nonpositive value");
              return std::sqrt(arg);
          }
          return 0.0;
        }
      },
      node->v);
}

ScalarField bind(const ExprAst& ast, const ParamTable& params) {
  check_params(ast, params);
  ExprNodePtr root = ast.root();
  ParamTable table = params;
  auto jet_fn = [root, table](const Point& p) {
    const std::array<Jet3, 4> vars{
        Jet3::variable(kAxisU, p[0]), Jet3::variable(kAxisV, p[1]),
        Jet3::variable(kAxisX, p[2]), Jet3::variable(kAxisY, p[3])};
    return eval_node<Jet3>(root, table, std::span<const Jet3, 4>(vars));
  };
  auto value_fn = [root, table](const Point& p) { return eval_double(root, table, p); };
  return ScalarField(std::move(jet_fn), std::move(value_fn), ast.text(),
                     ast.variables());
}

Profile bind_profile(const ExprAst& ast, const ParamTable& params) {
  check_params(ast, params);
  const Deps& vars = ast.variables();
  if (vars[kAxisU] || vars[kAxisX] || vars[kAxisY])
    throw ConstraintError("profile expression must depend on v only: " + ast.text());
  ExprNodePtr root = ast.root();
  ParamTable table = params;
  auto fn = [root, table](double v) {
    using S = Profile::Series;
    const std::array<S, 4> vars_j{S::constant(0.0), S::variable(v), S::constant(0.0),
                                  S::constant(0.0)};
    return eval_node<S>(root, table, std::span<const S, 4>(vars_j));
  };
  return Profile(std::move(fn), ast.text());
}

}  // namespace prwave
