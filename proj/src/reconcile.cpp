#include "ooasp/reconcile.hpp"

#include <algorithm>
#include <functional>
#include <json.hpp>
#include <sstream>

namespace ooasp {

FactKind fact_kind_of(const Fact& f) {
  if (f.predicate == "ooasp_isa") return FactKind::Isa;
  if (f.predicate == "ooasp_associated") return FactKind::Associated;
  if (f.predicate == "ooasp_attribute_value") return FactKind::AttributeValue;
  throw SemanticError("not an instance-level content fact: " + fact_to_text(f));
}

std::string fact_kind_name(FactKind k) {
  switch (k) {
    case FactKind::Isa: return "isa";
    case FactKind::Associated: return "associated";
    case FactKind::AttributeValue: return "attribute_value";
  }
  return "?";
}

std::optional<FactKind> fact_kind_from_name(const std::string& name) {
  if (name == "isa") return FactKind::Isa;
  if (name == "associated") return FactKind::Associated;
  if (name == "attribute_value") return FactKind::AttributeValue;
  return std::nullopt;
}

CostTable CostTable::parse(const std::string& text) {
  CostTable table;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto cut = line.find('%');
    if (cut != std::string::npos) line.resize(cut);
    std::istringstream ls(line);
    std::string action, kind;
    long long value;
    if (!(ls >> action)) continue;  // blank line
    if (!(ls >> kind >> value))
      throw SemanticError("cost table line " + std::to_string(lineno) +
                          ": expected `action kind cost`");
    ChangeAction a;
    if (action == "reuse")
      a = ChangeAction::Reuse;
    else if (action == "delete")
      a = ChangeAction::Delete;
    else if (action == "create")
      a = ChangeAction::Create;
    else
      throw SemanticError("cost table line " + std::to_string(lineno) +
                          ": unknown action '" + action + "'");
    auto k = fact_kind_from_name(kind);
    if (!k)
      throw SemanticError("cost table line " + std::to_string(lineno) +
                          ": unknown fact kind '" + kind + "'");
    if (value < 0)
      throw SemanticError("cost table line " + std::to_string(lineno) +
                          ": costs must be non-negative");
    table.at(a, *k) = static_cast<int>(value);
    std::string extra;
    if (ls >> extra)
      throw SemanticError("cost table line " + std::to_string(lineno) +
                          ": trailing input '" + extra + "'");
  }
  return table;
}

std::vector<ReifiedFact> reify(const Instantiation& inst) {
  std::vector<ReifiedFact> out;
  for (Fact& f : [&] {
         auto facts = inst.content_facts();
         std::sort(facts.begin(), facts.end());
         return facts;
       }())
    out.push_back({std::move(f)});
  return out;
}

namespace {

std::vector<long long> fact_objects(const Fact& f) {
  switch (fact_kind_of(f)) {
    case FactKind::Isa:
      return {std::get<long long>(f.args[2])};
    case FactKind::Associated:
      return {std::get<long long>(f.args[2]), std::get<long long>(f.args[3])};
    case FactKind::AttributeValue:
      return {std::get<long long>(f.args[2])};
  }
  return {};
}

bool references_missing_element(const Fact& f, const Model& target) {
  switch (fact_kind_of(f)) {
    case FactKind::Isa:
      return !target.has_class(std::get<std::string>(f.args[1]));
    case FactKind::Associated:
      return !target.has_association(std::get<std::string>(f.args[1]));
    case FactKind::AttributeValue:
      return !target.has_attribute_anywhere(std::get<std::string>(f.args[1]));
  }
  return false;
}

struct Candidate {
  long long cost;
  std::string key;  // deterministic tie-break
  ChangeSet cs;
};

class Reconciler {
 public:
  Reconciler(const Instantiation& legacy, const Model& target,
             const std::vector<ConstraintRule>& rules, const CostTable& costs,
             const CompletionConfig& config)
      : legacy_(legacy), target_(target), rules_(rules), costs_(costs),
        config_(config) {
    for (ReifiedFact& rf : reify(legacy_)) facts_.push_back(std::move(rf.fact));
    // isa facts first so object deletions cascade onto links and values
    std::stable_sort(facts_.begin(), facts_.end(),
                     [](const Fact& a, const Fact& b) {
                       return rank(a) < rank(b);
                     });
    forced_.resize(facts_.size());
    for (size_t i = 0; i < facts_.size(); ++i)
      forced_[i] = references_missing_element(facts_[i], target_);
    if (!config_.id_base) config_.id_base = legacy_.max_object_id() + 1;
    create_costs_.isa = costs_.at(ChangeAction::Create, FactKind::Isa);
    create_costs_.associated =
        costs_.at(ChangeAction::Create, FactKind::Associated);
    create_costs_.attribute_value =
        costs_.at(ChangeAction::Create, FactKind::AttributeValue);
  }

  ReconcileResult run() {
    long long lb = 0, decision_ub = 0;
    for (size_t i = 0; i < facts_.size(); ++i) {
      int rc = cost(ChangeAction::Reuse, facts_[i]);
      int dc = cost(ChangeAction::Delete, facts_[i]);
      lb += forced_[i] ? dc : std::min(rc, dc);
      decision_ub += std::max(rc, dc);
    }
    long long ub = decision_ub + max_creation_cost();

    ReconcileResult result;
    for (long long budget = lb; budget <= ub; ++budget) {
      budget_ = budget;
      best_.reset();
      std::vector<size_t> reused;
      descend(0, 0, reused);
      if (best_) {
        result.change_set = std::move(best_->cs);
        result.stats = stats_;
        return result;
      }
    }
    result.stats = stats_;
    return result;  // unsat within bounds
  }

 private:
  static int rank(const Fact& f) {
    switch (fact_kind_of(f)) {
      case FactKind::Isa: return 0;
      case FactKind::Associated: return 1;
      case FactKind::AttributeValue: return 2;
    }
    return 3;
  }

  int cost(ChangeAction a, const Fact& f) const {
    return costs_.at(a, fact_kind_of(f));
  }

  // coarse cap on what a completion could ever create within bounds
  long long max_creation_cost() const {
    long long objects = static_cast<long long>(legacy_.objects().size());
    for (const auto& [cls, n] : config_.max_new_per_class) objects += n;
    long long links = 0;
    for (const auto& [aid, a] : target_.associations())
      links += objects * std::min<long long>(a.max2, objects);
    long long values =
        objects * static_cast<long long>(target_.attributes().size());
    long long per_create =
        std::max({create_costs_.isa, create_costs_.associated,
                  create_costs_.attribute_value});
    return (objects + links + values) * per_create;
  }

  bool object_has_reused_isa(long long o,
                             const std::vector<size_t>& reused) const {
    for (size_t i : reused)
      if (fact_kind_of(facts_[i]) == FactKind::Isa &&
          std::get<long long>(facts_[i].args[2]) == o)
        return true;
    return false;
  }

  void descend(size_t i, long long cost_so_far, std::vector<size_t>& reused) {
    if (cost_so_far > budget_) return;
    if (i == facts_.size()) {
      finish(cost_so_far, reused);
      return;
    }
    const Fact& f = facts_[i];
    bool must_delete = forced_[i];
    if (!must_delete && fact_kind_of(f) != FactKind::Isa) {
      // referential cascade: facts over deleted objects cannot be reused
      for (long long o : fact_objects(f))
        if (!object_has_reused_isa(o, reused)) must_delete = true;
    }
    if (!must_delete) {
      reused.push_back(i);
      descend(i + 1, cost_so_far + cost(ChangeAction::Reuse, f), reused);
      reused.pop_back();
    }
    descend(i + 1, cost_so_far + cost(ChangeAction::Delete, f), reused);
  }

  void finish(long long decisions_cost, const std::vector<size_t>& reused) {
    // reuse set as an instantiation of the target model
    std::vector<Fact> reused_facts;
    for (size_t i : reused) reused_facts.push_back(facts_[i]);
    Instantiation input = Instantiation::build(legacy_.id(), target_, reused_facts);
    long long creation_budget = budget_ - decisions_cost;
    enumerate_completions(
        target_, input, rules_, config_, create_costs_, creation_budget, stats_,
        [&](const Instantiation& sol, long long creation_cost) {
          record(decisions_cost + creation_cost, reused_facts, sol);
          return true;
        });
  }

  void record(long long total, const std::vector<Fact>& reused_facts,
              const Instantiation& sol) {
    ChangeSet cs;
    cs.total_cost = total;
    cs.reused = reused_facts;
    std::set<Fact> reused_set(reused_facts.begin(), reused_facts.end());
    for (const Fact& f : facts_)
      if (!reused_set.count(f)) cs.deleted.push_back(f);
    for (Fact& f : sol.content_facts())
      if (!reused_set.count(f)) cs.created.push_back(std::move(f));
    cs.result = sol;
    std::string key = serialize_facts(cs.deleted) + "|" +
                      serialize_facts(cs.created) + "|" + solution_key(sol);
    if (!best_ || total < best_->cost ||
        (total == best_->cost && key < best_->key))
      best_ = Candidate{total, std::move(key), std::move(cs)};
  }

  const Instantiation& legacy_;
  const Model& target_;
  const std::vector<ConstraintRule>& rules_;
  const CostTable& costs_;
  CompletionConfig config_;
  CreationCosts create_costs_;

  std::vector<Fact> facts_;
  std::vector<char> forced_;
  long long budget_ = 0;
  std::optional<Candidate> best_;
  CompletionStats stats_;
};

}  // namespace

ReconcileResult reconcile(const Instantiation& legacy, const Model& target_model,
                          const std::vector<ConstraintRule>& rules,
                          const CostTable& costs,
                          const CompletionConfig& config) {
  return Reconciler(legacy, target_model, rules, costs, config).run();
}

std::string change_set_to_json(const ChangeSet& cs) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["total_cost"] = cs.total_cost;
  auto facts_json = [](const std::vector<Fact>& facts) {
    nlohmann::json arr = nlohmann::json::array();
    std::vector<Fact> sorted = facts;
    std::sort(sorted.begin(), sorted.end());
    for (const Fact& f : sorted) arr.push_back(fact_to_text(f));
    return arr;
  };
  j["reused"] = facts_json(cs.reused);
  j["deleted"] = facts_json(cs.deleted);
  j["created"] = facts_json(cs.created);
  j["result"]["instantiation"] = cs.result.id();
  j["result"]["model"] = cs.result.model_id();
  return j.dump(2);
}

}  // namespace ooasp
