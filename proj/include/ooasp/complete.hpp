#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ooasp/constraints.hpp"
#include "ooasp/instantiation.hpp"
#include "ooasp/model.hpp"
#include "ooasp/validate.hpp"

namespace ooasp {

struct CompletionConfig {
  std::map<std::string, int> max_new_per_class;  // leaf class -> bound
  std::optional<std::pair<long long, long long>> default_int_domain;
  int max_solutions = 1;
  std::optional<long long> id_base;  // default: 1 + max existing object id

  int bound(const std::string& cls) const {
    auto it = max_new_per_class.find(cls);
    return it == max_new_per_class.end() ? 0 : it->second;
  }
};

struct CompletionStats {
  long long nodes = 0;
  double wall_ms = 0.0;
};

enum class CompletionOutcome { Sat, UnsatWithinBounds, InputInvalid };

struct CompletionResult {
  CompletionOutcome outcome = CompletionOutcome::UnsatWithinBounds;
  std::vector<Instantiation> solutions;          // canonicalized, search order
  std::optional<ValidationReport> invalid_report;  // set for InputInvalid
  CompletionStats stats;
};

struct CompletionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Extends `inst` with new leaf-class objects, links, and attribute values
// into instantiations that validate clean in complete mode. Solutions are
// canonicalized (new objects renamed into a deterministic sequence) and
// pairwise non-isomorphic.
CompletionResult complete(const Model& model, const Instantiation& inst,
                          const std::vector<ConstraintRule>& rules,
                          const CompletionConfig& config);

struct ConsistencyResult {
  bool consistent = false;
  std::optional<Instantiation> witness;
  CompletionStats stats;
};

// Completion over the empty instantiation (the witness may itself be empty).
ConsistencyResult check_model_consistency(const Model& model,
                                          const std::vector<ConstraintRule>& rules,
                                          const CompletionConfig& config);

// ---- advanced surface used by reconciliation ----

struct CreationCosts {
  int isa = 1;
  int associated = 1;
  int attribute_value = 1;
};

// Enumerates completions of `inst`, invoking `on_solution` with each
// canonicalized solution and its creation cost (sum of CreationCosts over
// added facts). Branches whose accumulated creation cost reaches `budget`
// are pruned when a budget is given. Returning false from the callback stops
// the enumeration. Returns false when the input is invalid (unfixable by
// fact addition).
bool enumerate_completions(
    const Model& model, const Instantiation& inst,
    const std::vector<ConstraintRule>& rules, const CompletionConfig& config,
    const std::optional<CreationCosts>& costs, std::optional<long long> budget,
    CompletionStats& stats,
    const std::function<bool(const Instantiation&, long long)>& on_solution);

// Renames objects of `solution` that are absent from `input` into the
// canonical id sequence starting at id_base, minimizing the serialized fact
// text over all class-preserving renamings.
Instantiation canonicalize_solution(const Instantiation& input,
                                    const Instantiation& solution,
                                    long long id_base);

long long default_id_base(const Instantiation& input,
                          const CompletionConfig& config);

std::string solution_key(const Instantiation& inst);

// Finite value domain of an attribute under the config's finitization rules;
// throws CompletionError when no finite domain exists.
std::vector<Arg> attribute_domain(const AttributeDecl& decl,
                                  const CompletionConfig& config);

}  // namespace ooasp
