#include "ooasp/fact.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace ooasp {

std::string arg_to_text(const Arg& a) {
  if (std::holds_alternative<long long>(a))
    return std::to_string(std::get<long long>(a));
  return "\"" + std::get<std::string>(a) + "\"";
}

namespace {

// Expected argument shapes: I = integer, S = quoted string, V = either.
const std::map<std::string, std::string>& signatures() {
  static const std::map<std::string, std::string> sigs = {
      {"ooasp_class", "SS"},
      {"ooasp_subclass", "SSS"},
      {"ooasp_assoc", "SSSIISII"},
      {"ooasp_attribute", "SSSS"},
      {"ooasp_attribute_minInclusive", "SSSI"},
      {"ooasp_attribute_maxInclusive", "SSSI"},
      {"ooasp_attribute_enum", "SSSS"},
      {"ooasp_instantiation", "SS"},
      {"ooasp_isa", "SSI"},
      {"ooasp_associated", "SSII"},
      {"ooasp_attribute_value", "SSIV"},
  };
  return sigs;
}

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  struct Token {
    enum Kind { Ident, Int, Str, Punct, End } kind;
    std::string text;
    long long value = 0;
    int line = 1, col = 1;
  };

  Token next() {
    skip_ws();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= text_.size()) {
      t.kind = Token::End;
      return t;
    }
    char c = text_[pos_];
    if (c == '(' || c == ')' || c == ',' || c == '.') {
      t.kind = Token::Punct;
      t.text = std::string(1, c);
      advance();
      return t;
    }
    if (c == '"') {
      advance();
      std::string s;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\n')
          throw ParseError(t.line, t.col, "unterminated string");
        s += text_[pos_];
        advance();
      }
      if (pos_ >= text_.size())
        throw ParseError(t.line, t.col, "unterminated string");
      advance();  // closing quote
      t.kind = Token::Str;
      t.text = s;
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      std::string num;
      if (c == '-') {
        num += c;
        advance();
      }
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        num += text_[pos_];
        advance();
      }
      t.kind = Token::Int;
      t.text = num;
      t.value = std::stoll(num);
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        id += text_[pos_];
        advance();
      }
      t.kind = Token::Ident;
      t.text = id;
      return t;
    }
    throw ParseError(line_, col_, std::string("unexpected character '") + c + "'");
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
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
};

using Token = Lexer::Token;

void expect_punct(const Token& t, char c) {
  if (t.kind != Token::Punct || t.text[0] != c)
    throw ParseError(t.line, t.col,
                     std::string("expected '") + c + "', got '" + t.text + "'");
}

void check_signature(const Fact& f, const Token& at) {
  const auto& sigs = signatures();
  auto it = sigs.find(f.predicate);
  if (it == sigs.end())
    throw ParseError(at.line, at.col, "unknown predicate '" + f.predicate + "'");
  const std::string& sig = it->second;
  if (f.args.size() != sig.size())
    throw ParseError(at.line, at.col,
                     "predicate '" + f.predicate + "' expects " +
                         std::to_string(sig.size()) + " arguments, got " +
                         std::to_string(f.args.size()));
  for (size_t i = 0; i < sig.size(); ++i) {
    bool is_int = std::holds_alternative<long long>(f.args[i]);
    if (sig[i] == 'I' && !is_int)
      throw ParseError(at.line, at.col,
                       "argument " + std::to_string(i + 1) + " of '" +
                           f.predicate + "' must be an integer");
    if (sig[i] == 'S' && is_int)
      throw ParseError(at.line, at.col,
                       "argument " + std::to_string(i + 1) + " of '" +
                           f.predicate + "' must be a quoted string");
  }
}

}  // namespace

FactFile parse_facts(const std::string& text) {
  Lexer lex(text);
  FactFile file;
  for (;;) {
    Token head = lex.next();
    if (head.kind == Token::End) break;
    if (head.kind != Token::Ident)
      throw ParseError(head.line, head.col, "expected predicate name");
    Fact f;
    f.predicate = head.text;
    f.line = head.line;
    f.col = head.col;
    expect_punct(lex.next(), '(');
    bool first = true;
    for (;;) {
      Token t = lex.next();
      if (t.kind == Token::Punct && t.text == ")" && first) break;
      if (!first) {
        if (t.kind == Token::Punct && t.text == ")") break;
        expect_punct(t, ',');
        t = lex.next();
      }
      first = false;
      if (t.kind == Token::Int) {
        f.args.emplace_back(t.value);
      } else if (t.kind == Token::Str) {
        f.args.emplace_back(t.text);
      } else if (t.kind == Token::Ident && f.predicate == "ooasp_cv" && !f.cv) {
        // nested violation functor: kind(arg,...)
        CvAtom cv;
        cv.kind = t.text;
        expect_punct(lex.next(), '(');
        bool cfirst = true;
        for (;;) {
          Token u = lex.next();
          if (u.kind == Token::Punct && u.text == ")") break;
          if (!cfirst) {
            expect_punct(u, ',');
            u = lex.next();
          }
          cfirst = false;
          if (u.kind == Token::Int)
            cv.args.emplace_back(u.value);
          else if (u.kind == Token::Str)
            cv.args.emplace_back(u.text);
          else
            throw ParseError(u.line, u.col, "expected argument in violation term");
        }
        f.cv = std::move(cv);
      } else {
        throw ParseError(t.line, t.col, "expected argument, got '" + t.text + "'");
      }
    }
    expect_punct(lex.next(), '.');
    if (f.predicate == "ooasp_cv") {
      if (f.args.size() != 1 || !std::holds_alternative<std::string>(f.args[0]) ||
          !f.cv)
        throw ParseError(f.line, f.col,
                         "ooasp_cv expects (instantiation id, violation term)");
    } else {
      check_signature(f, head);
    }
    file.facts.push_back(std::move(f));
  }
  return file;
}

std::string fact_to_text(const Fact& f) {
  std::ostringstream os;
  os << f.predicate << '(';
  for (size_t i = 0; i < f.args.size(); ++i) {
    if (i) os << ',';
    os << arg_to_text(f.args[i]);
  }
  if (f.cv) {
    if (!f.args.empty()) os << ',';
    os << f.cv->kind << '(';
    for (size_t i = 0; i < f.cv->args.size(); ++i) {
      if (i) os << ',';
      os << arg_to_text(f.cv->args[i]);
    }
    os << ')';
  }
  os << ").";
  return os.str();
}

std::string serialize_facts(std::vector<Fact> facts) {
  std::sort(facts.begin(), facts.end());
  facts.erase(std::unique(facts.begin(), facts.end()), facts.end());
  std::string out;
  for (const Fact& f : facts) {
    out += fact_to_text(f);
    out += '\n';
  }
  return out;
}

}  // namespace ooasp
