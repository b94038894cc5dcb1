#include "ooasp/constraints.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>

namespace ooasp {

bool ConstraintRule::persists_under_extension() const {
  for (const BodyLiteral& l : body)
    if (l.negated && l.type != BodyLiteral::Isa) return false;
  return true;
}

namespace {

struct Token {
  enum Kind { Ident, Int, Str, Sym, End } kind = End;
  std::string text;
  long long value = 0;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance_token(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance_token();
    return t;
  }

 private:
  void advance_token() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= text_.size()) {
      tok_.kind = Token::End;
      return;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        id += text_[pos_];
        bump();
      }
      tok_.kind = Token::Ident;
      tok_.text = id;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        num += text_[pos_];
        bump();
      }
      tok_.kind = Token::Int;
      tok_.value = std::stoll(num);
      return;
    }
    if (c == '"') {
      bump();
      std::string s;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\n') fail("unterminated string");
        s += text_[pos_];
        bump();
      }
      if (pos_ >= text_.size()) fail("unterminated string");
      bump();
      tok_.kind = Token::Str;
      tok_.text = s;
      return;
    }
    // multi-char symbols first
    static const char* two[] = {":-", "!=", "<=", ">="};
    for (const char* s : two) {
      if (text_.compare(pos_, 2, s) == 0) {
        tok_.kind = Token::Sym;
        tok_.text = s;
        bump();
        bump();
        return;
      }
    }
    if (std::string("(),.=<>+-").find(c) != std::string::npos) {
      tok_.kind = Token::Sym;
      tok_.text = std::string(1, c);
      bump();
      return;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConstraintParseError("line " + std::to_string(line_) + ", col " +
                               std::to_string(col_) + ": " + msg);
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

[[noreturn]] void fail_at(const Token& t, const std::string& msg) {
  throw ConstraintParseError("line " + std::to_string(t.line) + ", col " +
                             std::to_string(t.col) + ": " + msg);
}

class RuleParser {
 public:
  explicit RuleParser(Lexer& lex) : lex_(lex) {}

  ConstraintRule parse_rule() {
    ConstraintRule rule;
    Token kw = lex_.take();
    if (kw.kind != Token::Ident || kw.text != "cv")
      fail_at(kw, "expected 'cv'");
    Token name = lex_.take();
    if (name.kind != Token::Ident) fail_at(name, "expected violation kind");
    rule.kind = name.text;
    expect_sym("(");
    if (!(lex_.peek().kind == Token::Sym && lex_.peek().text == ")")) {
      for (;;) {
        Token v = lex_.take();
        if (v.kind != Token::Ident) fail_at(v, "expected head variable");
        rule.head_vars.push_back(v.text);
        if (lex_.peek().kind == Token::Sym && lex_.peek().text == ",") {
          lex_.take();
          continue;
        }
        break;
      }
    }
    expect_sym(")");
    if (lex_.peek().kind == Token::Ident && lex_.peek().text == "model") {
      lex_.take();
      Token m = lex_.take();
      if (m.kind != Token::Str) fail_at(m, "expected quoted model id");
      rule.model_scope = m.text;
    }
    expect_sym(":-");
    for (;;) {
      rule.body.push_back(parse_literal());
      Token t = lex_.take();
      if (t.kind == Token::Sym && t.text == ",") continue;
      if (t.kind == Token::Sym && t.text == ".") break;
      fail_at(t, "expected ',' or '.' after body literal");
    }
    check_safety(rule, kw);
    return rule;
  }

 private:
  void expect_sym(const std::string& s) {
    Token t = lex_.take();
    if (t.kind != Token::Sym || t.text != s)
      fail_at(t, "expected '" + s + "'");
  }

  DslTerm parse_term() {
    Token t = lex_.take();
    if (t.kind == Token::Int) return DslTerm::integer(t.value);
    if (t.kind == Token::Str) return DslTerm::string(t.text);
    if (t.kind != Token::Ident) fail_at(t, "expected term");
    long long offset = 0;
    if (lex_.peek().kind == Token::Sym &&
        (lex_.peek().text == "+" || lex_.peek().text == "-")) {
      std::string sign = lex_.take().text;
      Token n = lex_.take();
      if (n.kind != Token::Int) fail_at(n, "expected integer offset");
      offset = sign == "+" ? n.value : -n.value;
    }
    return DslTerm::variable(t.text, offset);
  }

  std::string parse_quoted() {
    Token t = lex_.take();
    if (t.kind != Token::Str) fail_at(t, "expected quoted identifier");
    return t.text;
  }

  BodyLiteral parse_literal() {
    BodyLiteral lit;
    if (lex_.peek().kind == Token::Ident && lex_.peek().text == "not") {
      lex_.take();
      lit.negated = true;
    }
    const Token& head = lex_.peek();
    if (head.kind == Token::Ident &&
        (head.text == "isa" || head.text == "associated" ||
         head.text == "value")) {
      // lookahead: `isa(` etc; a bare variable named isa would be odd anyway
      std::string atom = lex_.take().text;
      expect_sym("(");
      if (atom == "isa") {
        lit.type = BodyLiteral::Isa;
        lit.a = parse_term();
        expect_sym(",");
        lit.name = parse_quoted();
      } else {
        lit.type = atom == "associated" ? BodyLiteral::Associated
                                        : BodyLiteral::Value;
        lit.name = parse_quoted();
        expect_sym(",");
        lit.a = parse_term();
        expect_sym(",");
        lit.b = parse_term();
      }
      expect_sym(")");
      return lit;
    }
    if (lit.negated) fail_at(head, "'not' applies to atoms only");
    lit.type = BodyLiteral::Cmp;
    lit.a = parse_term();
    Token op = lex_.take();
    if (op.kind != Token::Sym) fail_at(op, "expected comparison operator");
    static const std::map<std::string, CmpOp> ops = {
        {"=", CmpOp::Eq}, {"!=", CmpOp::Ne}, {"<", CmpOp::Lt},
        {"<=", CmpOp::Le}, {">", CmpOp::Gt}, {">=", CmpOp::Ge}};
    auto it = ops.find(op.text);
    if (it == ops.end()) fail_at(op, "expected comparison operator");
    lit.op = it->second;
    lit.b = parse_term();
    if (lit.a.kind == DslTerm::Str || lit.b.kind == DslTerm::Str) {
      if (lit.op != CmpOp::Eq && lit.op != CmpOp::Ne)
        fail_at(op, "comparison over non-integer term");
    }
    return lit;
  }

  static void collect_vars(const DslTerm& t, std::set<std::string>& out) {
    if (t.kind == DslTerm::Var) out.insert(t.var);
  }

  void check_safety(const ConstraintRule& rule, const Token& at) {
    std::set<std::string> bound;
    for (const BodyLiteral& l : rule.body) {
      if (l.type == BodyLiteral::Cmp || l.negated) continue;
      collect_vars(l.a, bound);
      collect_vars(l.b, bound);
    }
    std::set<std::string> needed;
    for (const std::string& v : rule.head_vars) needed.insert(v);
    for (const BodyLiteral& l : rule.body) {
      if (l.type == BodyLiteral::Cmp || l.negated) {
        collect_vars(l.a, needed);
        collect_vars(l.b, needed);
      }
    }
    for (const std::string& v : needed)
      if (!bound.count(v))
        fail_at(at, "unsafe rule '" + rule.kind + "': variable " + v +
                        " has no positive occurrence");
  }

  Lexer& lex_;
};

// ---- evaluation ----

using Bindings = std::map<std::string, Arg>;

bool term_ground(const DslTerm& t, const Bindings& b) {
  return t.kind != DslTerm::Var || b.count(t.var) > 0;
}

// value of a ground term; ordering/arithmetic over strings raises
Arg term_value(const DslTerm& t, const Bindings& b) {
  switch (t.kind) {
    case DslTerm::Int:
      return Arg(t.number);
    case DslTerm::Str:
      return Arg(t.text);
    case DslTerm::Var: {
      const Arg& v = b.at(t.var);
      if (t.number == 0) return v;
      if (!std::holds_alternative<long long>(v))
        throw ConstraintEvalError("arithmetic over non-integer value of " +
                                  t.var);
      return Arg(std::get<long long>(v) + t.number);
    }
  }
  return Arg(0LL);
}

// Unifies term t with concrete value v, extending b. Returns false on clash.
bool unify(const DslTerm& t, const Arg& v, Bindings& b) {
  if (t.kind == DslTerm::Int)
    return std::holds_alternative<long long>(v) &&
           std::get<long long>(v) == t.number;
  if (t.kind == DslTerm::Str)
    return std::holds_alternative<std::string>(v) &&
           std::get<std::string>(v) == t.text;
  // variable, possibly with offset
  if (t.number != 0) {
    if (!std::holds_alternative<long long>(v)) return false;
    Arg base(std::get<long long>(v) - t.number);
    auto it = b.find(t.var);
    if (it != b.end()) return it->second == base;
    b.emplace(t.var, base);
    return true;
  }
  auto it = b.find(t.var);
  if (it != b.end()) return it->second == v;
  b.emplace(t.var, v);
  return true;
}

bool isa_holds(const Model& model, const Instantiation& inst, long long obj,
               const std::string& cls) {
  const std::string* c = inst.class_of(obj);
  if (!c || !model.has_class(*c)) return false;
  return model.is_subclass_of(*c, cls);
}

bool cmp_holds(CmpOp op, const Arg& x, const Arg& y) {
  bool xi = std::holds_alternative<long long>(x);
  bool yi = std::holds_alternative<long long>(y);
  if (op == CmpOp::Eq) return x == y;
  if (op == CmpOp::Ne) return x != y;
  if (!xi || !yi)
    throw ConstraintEvalError("comparison over non-integer term");
  long long a = std::get<long long>(x), b = std::get<long long>(y);
  switch (op) {
    case CmpOp::Lt: return a < b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Gt: return a > b;
    case CmpOp::Ge: return a >= b;
    default: return false;
  }
}

class RuleEvaluator {
 public:
  RuleEvaluator(const ConstraintRule& rule, const Model& model,
                const Instantiation& inst)
      : rule_(rule), model_(model), inst_(inst) {}

  std::set<GroundViolation> run() {
    std::set<GroundViolation> out;
    std::vector<const BodyLiteral*> body;
    for (const BodyLiteral& l : rule_.body) body.push_back(&l);
    Bindings b;
    step(body, b, out);
    return out;
  }

 private:
  // Checks a ground negated atom or comparison.
  bool check(const BodyLiteral& l, const Bindings& b) const {
    bool holds = false;
    switch (l.type) {
      case BodyLiteral::Isa: {
        Arg o = term_value(l.a, b);
        holds = std::holds_alternative<long long>(o) &&
                isa_holds(model_, inst_, std::get<long long>(o), l.name);
        break;
      }
      case BodyLiteral::Associated: {
        Arg o1 = term_value(l.a, b), o2 = term_value(l.b, b);
        holds = std::holds_alternative<long long>(o1) &&
                std::holds_alternative<long long>(o2) &&
                inst_.links().count({l.name, std::get<long long>(o1),
                                     std::get<long long>(o2)}) > 0;
        break;
      }
      case BodyLiteral::Value: {
        Arg o = term_value(l.a, b), v = term_value(l.b, b);
        holds = std::holds_alternative<long long>(o) &&
                inst_.values().count({l.name, std::get<long long>(o), v}) > 0;
        break;
      }
      case BodyLiteral::Cmp:
        return cmp_holds(l.op, term_value(l.a, b), term_value(l.b, b));
    }
    return l.negated ? !holds : holds;
  }

  bool evaluable(const BodyLiteral& l, const Bindings& b) const {
    if (l.type == BodyLiteral::Cmp || l.negated)
      return term_ground(l.a, b) &&
             (l.type == BodyLiteral::Isa || term_ground(l.b, b));
    return false;  // positive atoms are joined, not checked
  }

  void step(std::vector<const BodyLiteral*> rest, Bindings& b,
            std::set<GroundViolation>& out) {
    // pull forward every negated/comparison literal that is ground already
    for (size_t i = 0; i < rest.size();) {
      const BodyLiteral& l = *rest[i];
      if ((l.type == BodyLiteral::Cmp || l.negated) && evaluable(l, b)) {
        if (!check(l, b)) return;
        rest.erase(rest.begin() + i);
      } else {
        ++i;
      }
    }
    if (rest.empty()) {
      GroundViolation v;
      v.kind = rule_.kind;
      for (const std::string& var : rule_.head_vars) v.args.push_back(b.at(var));
      out.insert(std::move(v));
      return;
    }
    // next positive atom in body order
    auto it = std::find_if(rest.begin(), rest.end(), [&](const BodyLiteral* l) {
      return l->type != BodyLiteral::Cmp && !l->negated;
    });
    if (it == rest.end())
      throw ConstraintEvalError("rule '" + rule_.kind +
                                "' has unresolvable body literals");
    const BodyLiteral& lit = **it;
    std::vector<const BodyLiteral*> next(rest.begin(), rest.end());
    next.erase(next.begin() + (it - rest.begin()));

    auto try_binding = [&](auto&& bind) {
      Bindings b2 = b;
      if (bind(b2)) step(next, b2, out);
    };

    switch (lit.type) {
      case BodyLiteral::Isa:
        for (const auto& [o, cls] : inst_.objects()) {
          if (!model_.has_class(cls) || !model_.is_subclass_of(cls, lit.name))
            continue;
          long long obj = o;
          try_binding([&](Bindings& b2) { return unify(lit.a, Arg(obj), b2); });
        }
        break;
      case BodyLiteral::Associated:
        for (const auto& [a, o1, o2] : inst_.links()) {
          if (a != lit.name) continue;
          long long x = o1, y = o2;
          try_binding([&](Bindings& b2) {
            return unify(lit.a, Arg(x), b2) && unify(lit.b, Arg(y), b2);
          });
        }
        break;
      case BodyLiteral::Value:
        for (const auto& [at, o, val] : inst_.values()) {
          if (at != lit.name) continue;
          long long obj = o;
          const Arg& v = val;
          try_binding([&](Bindings& b2) {
            return unify(lit.a, Arg(obj), b2) && unify(lit.b, v, b2);
          });
        }
        break;
      case BodyLiteral::Cmp:
        break;  // unreachable
    }
  }

  const ConstraintRule& rule_;
  const Model& model_;
  const Instantiation& inst_;
};

void check_rule_references(const ConstraintRule& rule, const Model& model) {
  for (const BodyLiteral& l : rule.body) {
    if (l.type == BodyLiteral::Isa && !model.has_class(l.name))
      throw ConstraintEvalError("rule '" + rule.kind +
                                "' references undeclared class '" + l.name +
                                "'");
    if (l.type == BodyLiteral::Associated && !model.has_association(l.name))
      throw ConstraintEvalError("rule '" + rule.kind +
                                "' references undeclared association '" +
                                l.name + "'");
    if (l.type == BodyLiteral::Value && !model.has_attribute_anywhere(l.name))
      throw ConstraintEvalError("rule '" + rule.kind +
                                "' references undeclared attribute '" + l.name +
                                "'");
  }
}

}  // namespace

std::vector<ConstraintRule> parse_constraints(const std::string& text) {
  Lexer lex(text);
  std::vector<ConstraintRule> rules;
  while (lex.peek().kind != Token::End) {
    RuleParser p(lex);
    rules.push_back(p.parse_rule());
  }
  return rules;
}

std::set<GroundViolation> evaluate_rule(const ConstraintRule& rule,
                                        const Model& model,
                                        const Instantiation& inst) {
  if (rule.model_scope && *rule.model_scope != model.id()) return {};
  check_rule_references(rule, model);
  return RuleEvaluator(rule, model, inst).run();
}

std::set<GroundViolation> evaluate_constraints(
    const std::vector<ConstraintRule>& rules, const Model& model,
    const Instantiation& inst) {
  std::set<GroundViolation> out;
  for (const ConstraintRule& rule : rules) {
    auto part = evaluate_rule(rule, model, inst);
    out.insert(part.begin(), part.end());
  }
  return out;
}

}  // namespace ooasp
