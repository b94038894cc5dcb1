#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ooasp/complete.hpp"
#include "ooasp/constraints.hpp"
#include "ooasp/instantiation.hpp"
#include "ooasp/model.hpp"

namespace ooasp {

enum class FactKind { Isa, Associated, AttributeValue };
enum class ChangeAction { Reuse, Delete, Create };

FactKind fact_kind_of(const Fact& f);
std::string fact_kind_name(FactKind k);
std::optional<FactKind> fact_kind_from_name(const std::string& name);

// Per-(action, fact kind) integer costs; defaults reuse=0, delete=1, create=1.
struct CostTable {
  int cost[3][3];

  CostTable() {
    for (int k = 0; k < 3; ++k) {
      cost[static_cast<int>(ChangeAction::Reuse)][k] = 0;
      cost[static_cast<int>(ChangeAction::Delete)][k] = 1;
      cost[static_cast<int>(ChangeAction::Create)][k] = 1;
    }
  }
  int& at(ChangeAction a, FactKind k) {
    return cost[static_cast<int>(a)][static_cast<int>(k)];
  }
  int at(ChangeAction a, FactKind k) const {
    return cost[static_cast<int>(a)][static_cast<int>(k)];
  }

  // Text format: one `action kind cost` triple per line, `%` comments.
  static CostTable parse(const std::string& text);
};

// One legacy instance-level fact wrapped for reuse/delete decisions.
struct ReifiedFact {
  Fact fact;
};

std::vector<ReifiedFact> reify(const Instantiation& inst);

struct ChangeSet {
  std::vector<Fact> reused;
  std::vector<Fact> deleted;
  std::vector<Fact> created;
  long long total_cost = 0;
  Instantiation result;
};

struct ReconcileResult {
  std::optional<ChangeSet> change_set;  // empty on unsat within bounds
  CompletionStats stats;
};

// Minimum-cost transformation of `legacy` into a valid instantiation of
// `target_model`: per-fact reuse/delete decisions plus fact creation via the
// completion search. Legacy facts naming classes, associations, or attributes
// absent from the target model are force-deleted. Ties are broken by the
// lexicographically smallest canonical change set.
ReconcileResult reconcile(const Instantiation& legacy, const Model& target_model,
                          const std::vector<ConstraintRule>& rules,
                          const CostTable& costs, const CompletionConfig& config);

std::string change_set_to_json(const ChangeSet& cs);

}  // namespace ooasp
