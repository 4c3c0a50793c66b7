#include "degen/dsl.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>

namespace degen::dsl {
namespace {

struct FuncInfo {
  std::string_view name;
  int arity;
};

constexpr std::array<FuncInfo, 7> kFuncs = {{{"exp", 1},
                                             {"sin", 1},
                                             {"cos", 1},
                                             {"abs", 1},
                                             {"min", 2},
                                             {"max", 2},
                                             {"pow", 2}}};

const FuncInfo* find_func(std::string_view name) {
  for (const auto& f : kFuncs)
    if (f.name == name) return &f;
  return nullptr;
}

NodePtr make_literal(double v) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Literal;
  n->literal = v;
  return n;
}

NodePtr make_var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Variable;
  n->name = std::move(name);
  return n;
}

NodePtr make_unary(NodePtr a) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Unary;
  n->op = '-';
  n->args = {std::move(a)};
  return n;
}

NodePtr make_binary(char op, NodePtr l, NodePtr r) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Binary;
  n->op = op;
  n->args = {std::move(l), std::move(r)};
  return n;
}

NodePtr make_call(std::string name, std::vector<NodePtr> args) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Call;
  n->name = std::move(name);
  n->args = std::move(args);
  return n;
}

class Parser {
 public:
  Parser(std::string_view src, std::span<const std::string_view> allowed)
      : src_(src), allowed_(allowed) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("expected end of input or an operator");
    return e;
  }

 private:
  std::string_view src_;
  std::span<const std::string_view> allowed_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& expected) const {
    throw DslError("syntax error at offset " + std::to_string(pos_) + ": " +
                       expected,
                   pos_);
  }

  void skip_ws() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  // expr := term (('+'|'-') term)*
  NodePtr expr() {
    NodePtr l = term();
    for (;;) {
      char c = peek();
      if (c != '+' && c != '-') return l;
      ++pos_;
      l = make_binary(c, std::move(l), term());
    }
  }

  // term := factor (('*'|'/') factor)*
  NodePtr term() {
    NodePtr l = factor();
    for (;;) {
      char c = peek();
      if (c != '*' && c != '/') return l;
      ++pos_;
      l = make_binary(c, std::move(l), factor());
    }
  }

  // factor := '-' factor | power.  Exponentiation binds tighter than the
  // unary minus, so -x^2 negates x^2.
  NodePtr factor() {
    if (eat('-')) return make_unary(factor());
    return power();
  }

  // power := primary ('^' factor)?   (right-associative; the exponent may
  // itself start with a unary minus, as in 2^-abs(m-j))
  NodePtr power() {
    NodePtr base = primary();
    if (peek() == '^') {
      ++pos_;
      return make_binary('^', std::move(base), factor());
    }
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("expected a number, variable, or '('");
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return identifier();
    fail("expected a number, variable, or '('");
  }

  NodePtr number() {
    const char* first = src_.data() + pos_;
    const char* last = src_.data() + src_.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr == first) fail("malformed number");
    if (!std::isfinite(value)) fail("number out of range");
    pos_ = static_cast<std::size_t>(ptr - src_.data());
    return make_literal(value);
  }

  NodePtr identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
            src_[pos_] == '_'))
      ++pos_;
    std::string name(src_.substr(start, pos_ - start));
    if (peek() == '(') {
      const FuncInfo* f = find_func(name);
      if (!f) {
        pos_ = start;
        fail("unknown function '" + name + "'");
      }
      ++pos_;  // '('
      std::vector<NodePtr> args;
      args.push_back(expr());
      while (eat(',')) args.push_back(expr());
      if (!eat(')')) fail("expected ')' or ','");
      if (static_cast<int>(args.size()) != f->arity) {
        pos_ = start;
        fail("function '" + name + "' takes " + std::to_string(f->arity) +
             " argument(s), got " + std::to_string(args.size()));
      }
      return make_call(std::move(name), std::move(args));
    }
    if (std::find(allowed_.begin(), allowed_.end(), name) == allowed_.end()) {
      pos_ = start;
      fail("unknown variable '" + name + "'");
    }
    return make_var(std::move(name));
  }
};

void collect_vars(const NodePtr& n, std::set<std::string>& out) {
  if (!n) return;
  if (n->kind == NodeKind::Variable) out.insert(n->name);
  for (const auto& a : n->args) collect_vars(a, out);
}

[[noreturn]] void eval_fail(const std::string& what) {
  throw DslError("evaluation error: " + what, 0);
}

double eval_node(const Node& n, const Bindings& env) {
  switch (n.kind) {
    case NodeKind::Literal:
      return n.literal;
    case NodeKind::Variable: {
      auto it = env.find(n.name);
      if (it == env.end()) eval_fail("unbound variable '" + n.name + "'");
      return it->second;
    }
    case NodeKind::Unary:
      return -eval_node(*n.args[0], env);
    case NodeKind::Binary: {
      double l = eval_node(*n.args[0], env);
      double r = eval_node(*n.args[1], env);
      double v = 0.0;
      switch (n.op) {
        case '+': v = l + r; break;
        case '-': v = l - r; break;
        case '*': v = l * r; break;
        case '/':
          if (r == 0.0) eval_fail("division by zero");
          v = l / r;
          break;
        case '^':
          if (l < 0.0 && r != std::nearbyint(r))
            eval_fail("negative base with non-integer exponent");
          v = std::pow(l, r);
          break;
        default: eval_fail("corrupt tree");
      }
      if (!std::isfinite(v)) eval_fail("non-finite result");
      return v;
    }
    case NodeKind::Call: {
      double a = eval_node(*n.args[0], env);
      double v = 0.0;
      if (n.name == "exp") v = std::exp(a);
      else if (n.name == "sin") v = std::sin(a);
      else if (n.name == "cos") v = std::cos(a);
      else if (n.name == "abs") v = std::abs(a);
      else {
        double b = eval_node(*n.args[1], env);
        if (n.name == "min") v = std::min(a, b);
        else if (n.name == "max") v = std::max(a, b);
        else if (n.name == "pow") {
          if (a < 0.0 && b != std::nearbyint(b))
            eval_fail("negative base with non-integer exponent");
          v = std::pow(a, b);
        } else eval_fail("corrupt tree");
      }
      if (!std::isfinite(v)) eval_fail("non-finite result");
      return v;
    }
  }
  eval_fail("corrupt tree");
}

// Precedence levels used by both the parser shape above and the unparser:
// 1 add/sub, 2 mul/div, 3 unary minus, 4 power, 5 atoms.
int prec(const Node& n) {
  switch (n.kind) {
    case NodeKind::Binary:
      if (n.op == '+' || n.op == '-') return 1;
      if (n.op == '*' || n.op == '/') return 2;
      return 4;
    case NodeKind::Unary:
      return 3;
    default:
      return 5;
  }
}

std::string format_literal(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

void unparse_node(const Node& n, std::string& out) {
  auto child = [&out](const Node& c, bool parens) {
    if (parens) out += '(';
    unparse_node(c, out);
    if (parens) out += ')';
  };
  switch (n.kind) {
    case NodeKind::Literal:
      out += format_literal(n.literal);
      return;
    case NodeKind::Variable:
      out += n.name;
      return;
    case NodeKind::Unary:
      out += '-';
      child(*n.args[0], prec(*n.args[0]) < 3);
      return;
    case NodeKind::Binary: {
      const Node& l = *n.args[0];
      const Node& r = *n.args[1];
      int p = prec(n);
      if (n.op == '^') {
        // left operand of ^ must be an atom; the right side re-enters at
        // the unary-minus level, so only +-*/ need wrapping there.
        child(l, prec(l) <= 4);
        out += '^';
        child(r, prec(r) < 3);
      } else {
        child(l, prec(l) < p);
        out += n.op;
        child(r, prec(r) <= p);
      }
      return;
    }
    case NodeKind::Call: {
      out += n.name;
      out += '(';
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ',';
        unparse_node(*n.args[i], out);
      }
      out += ')';
      return;
    }
  }
}

bool equal_node(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::Literal:
      return a.literal == b.literal;
    case NodeKind::Variable:
      return a.name == b.name;
    case NodeKind::Unary:
      return equal_node(*a.args[0], *b.args[0]);
    case NodeKind::Binary:
      return a.op == b.op && equal_node(*a.args[0], *b.args[0]) &&
             equal_node(*a.args[1], *b.args[1]);
    case NodeKind::Call:
      if (a.name != b.name || a.args.size() != b.args.size()) return false;
      for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!equal_node(*a.args[i], *b.args[i])) return false;
      return true;
  }
  return false;
}

}  // namespace

Expression::Expression(NodePtr root) : root_(std::move(root)) {
  collect_vars(root_, vars_);
}

double Expression::evaluate(const Bindings& env) const {
  if (!root_) eval_fail("empty expression");
  return eval_node(*root_, env);
}

std::string Expression::unparse() const {
  std::string out;
  if (root_) unparse_node(*root_, out);
  return out;
}

bool Expression::depends_on(std::string_view v) const {
  return vars_.count(std::string(v)) != 0;
}

bool Expression::equal(const Expression& other) const {
  if (!root_ || !other.root_) return root_ == other.root_;
  return equal_node(*root_, *other.root_);
}

Expression parse(std::string_view source,
                 std::span<const std::string_view> allowed) {
  Parser p(source, allowed);
  return Expression(p.run());
}

Expression parse(std::string_view source) {
  return parse(source, kDefaultVariables);
}

}  // namespace degen::dsl
