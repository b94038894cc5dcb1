#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ooasp {

// Term argument of a DDL fact: integers order before strings.
using Arg = std::variant<long long, std::string>;

std::string arg_to_text(const Arg& a);

struct ParseError : std::runtime_error {
  int line;
  int col;
  ParseError(int line_, int col_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ", col " +
                           std::to_string(col_) + ": " + msg),
        line(line_), col(col_) {}
};

// Nested functor term carried by ooasp_cv facts, e.g. mincardviolated(10,"A").
struct CvAtom {
  std::string kind;
  std::vector<Arg> args;

  friend auto operator<=>(const CvAtom&, const CvAtom&) = default;
};

struct Fact {
  std::string predicate;
  std::vector<Arg> args;          // flat arguments (for ooasp_cv: the inst id)
  std::optional<CvAtom> cv;       // set iff predicate == "ooasp_cv"
  int line = 0;
  int col = 0;

  // source location is not part of a fact's identity
  friend bool operator==(const Fact& a, const Fact& b) {
    return a.predicate == b.predicate && a.args == b.args && a.cv == b.cv;
  }
  friend auto operator<=>(const Fact& a, const Fact& b) {
    if (auto c = a.predicate <=> b.predicate; c != 0) return c;
    if (auto c = a.args <=> b.args; c != 0) return c;
    return a.cv <=> b.cv;
  }
};

struct FactFile {
  std::vector<Fact> facts;  // in source order
};

// Parses DDL fact text: `pred(arg,...).`, `%` line comments, free whitespace.
// Predicates restricted to the DDL vocabulary plus ooasp_cv; arity and
// argument types (object ids are integers) are checked here.
FactFile parse_facts(const std::string& text);

std::string fact_to_text(const Fact& f);

// Canonical serialization: facts sorted by (predicate, args), duplicates
// collapsed, one fact per line.
std::string serialize_facts(std::vector<Fact> facts);

}  // namespace ooasp
