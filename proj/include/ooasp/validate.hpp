#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ooasp/constraints.hpp"
#include "ooasp/instantiation.hpp"
#include "ooasp/model.hpp"

namespace ooasp {

enum class ValidationMode { Partial, Complete };

struct Violation {
  std::string kind;
  std::vector<Arg> args;            // the arguments of the ooasp_cv functor
  std::optional<std::string> side;  // cardinality checks: endpoint of args[0]
  std::string message;

  // message is presentation only
  friend bool operator==(const Violation& a, const Violation& b) {
    return a.kind == b.kind && a.args == b.args && a.side == b.side;
  }
  friend auto operator<=>(const Violation& a, const Violation& b) {
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    if (auto c = a.args <=> b.args; c != 0) return c;
    return a.side <=> b.side;
  }
};

struct ValidationReport {
  std::string inst_id;
  ValidationMode mode = ValidationMode::Complete;
  std::set<Violation> violations;

  bool valid() const { return violations.empty(); }
  bool has(const std::string& kind, const std::vector<Arg>& args) const;
};

// Derives every integrity-constraint and domain-specific violation. Partial
// mode suppresses minimum-cardinality and missing-attribute findings, which a
// legitimately incomplete instantiation may exhibit.
ValidationReport validate(const Model& model, const Instantiation& inst,
                          const std::vector<ConstraintRule>& rules,
                          ValidationMode mode);

// Partial-mode findings restricted to violations that persist under any fact
// addition; used to classify completion inputs as unfixable. DSL rules whose
// negated literals are not isa-only are excluded.
ValidationReport validate_persistent(const Model& model,
                                     const Instantiation& inst,
                                     const std::vector<ConstraintRule>& rules);

// Violation list as ooasp_cv facts; cardinality atoms carry the object and
// association only (the endpoint side stays in Violation::side).
std::vector<Fact> violations_to_facts(const ValidationReport& report);

// Structured report: kind, args, side, message per violation.
std::string report_to_json(const ValidationReport& report);

}  // namespace ooasp
