#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ooasp/instantiation.hpp"
#include "ooasp/model.hpp"

namespace ooasp {

// A term in a constraint body: variable (with optional integer offset),
// integer literal, or string literal.
struct DslTerm {
  enum Kind { Var, Int, Str } kind = Int;
  std::string var;
  long long number = 0;     // literal value, or offset added to `var`
  std::string text;

  static DslTerm variable(std::string v, long long offset = 0) {
    DslTerm t;
    t.kind = Var;
    t.var = std::move(v);
    t.number = offset;
    return t;
  }
  static DslTerm integer(long long v) {
    DslTerm t;
    t.kind = Int;
    t.number = v;
    return t;
  }
  static DslTerm string(std::string s) {
    DslTerm t;
    t.kind = Str;
    t.text = std::move(s);
    return t;
  }
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

struct BodyLiteral {
  enum Type { Isa, Associated, Value, Cmp } type = Isa;
  bool negated = false;
  std::string name;     // class id (Isa), assoc id (Associated), attr id (Value)
  DslTerm a, b;         // Isa uses a; Cmp uses a op b
  CmpOp op = CmpOp::Eq;
};

struct ConstraintRule {
  std::string kind;                      // violation kind of the head
  std::vector<std::string> head_vars;
  std::optional<std::string> model_scope;
  std::vector<BodyLiteral> body;

  // true when every derivation over a partial instantiation persists under
  // fact addition: all negated literals are isa atoms (class facts are fixed
  // once the object universe is chosen).
  bool persists_under_extension() const;
};

struct ConstraintParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConstraintEvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Grammar:
//   rule    := "cv" ident "(" [vars] ")" ["model" string] ":-" lit {"," lit} "."
//   lit     := ["not"] atom | term cmp term
//   atom    := "isa" "(" term "," string ")"
//            | "associated" "(" string "," term "," term ")"
//            | "value" "(" string "," term "," term ")"
//   term    := VAR | INT | STRING | VAR ("+"|"-") INT
//   cmp     := "=" | "!=" | "<" | "<=" | ">" | ">="
// `%` starts a line comment. Safety and stratification are checked.
std::vector<ConstraintRule> parse_constraints(const std::string& text);

struct GroundViolation {
  std::string kind;
  std::vector<Arg> args;
  auto operator<=>(const GroundViolation&) const = default;
};

// Derives all ground head atoms of `rules` over `inst`. isa literals hold
// under inheritance closure; negation is negation-as-failure against `inst`.
// Rules scoped to a different model id are skipped. Throws
// ConstraintEvalError when a rule names a class/association/attribute the
// model does not declare.
std::set<GroundViolation> evaluate_constraints(
    const std::vector<ConstraintRule>& rules, const Model& model,
    const Instantiation& inst);

std::set<GroundViolation> evaluate_rule(const ConstraintRule& rule,
                                        const Model& model,
                                        const Instantiation& inst);

}  // namespace ooasp
