#pragma once

#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "degen/errors.hpp"

// Small expression language for coefficient and coupling laws.
// Grammar: +,-,*,/ left-associative, ^ right-associative and binding
// tighter than unary minus; calls exp, sin, cos, abs, min, max, pow.
namespace degen::dsl {

enum class NodeKind { Literal, Variable, Unary, Binary, Call };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind{};
  double literal = 0.0;       // Literal
  std::string name;           // Variable / Call
  char op = 0;                // Binary: one of + - * / ^
  std::vector<NodePtr> args;  // Unary: 1, Binary: 2, Call: arity of name
};

using Bindings = std::map<std::string, double>;

class Expression {
 public:
  Expression() = default;
  explicit Expression(NodePtr root);

  double evaluate(const Bindings& env) const;
  std::string unparse() const;
  // Free variables appearing in the tree (subset of the set the parser
  // allowed; lets callers cache laws that ignore x and y).
  const std::set<std::string>& variables() const { return vars_; }
  bool depends_on(std::string_view v) const;
  bool equal(const Expression& other) const;
  const NodePtr& root() const { return root_; }
  bool empty() const { return root_ == nullptr; }

 private:
  NodePtr root_;
  std::set<std::string> vars_;
};

inline constexpr std::string_view kDefaultVariables[] = {"x", "y", "m", "j",
                                                         "t"};
// Laws for nonlinear terms may also reference the state.
inline constexpr std::string_view kStateVariables[] = {"x", "y", "m",  "j",
                                                       "t", "u", "ux", "uy"};

Expression parse(std::string_view source);
Expression parse(std::string_view source,
                 std::span<const std::string_view> allowed);

}  // namespace degen::dsl
