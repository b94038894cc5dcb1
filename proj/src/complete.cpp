#include "ooasp/complete.hpp"

#include <algorithm>
#include <chrono>
#include <set>

namespace ooasp {

long long default_id_base(const Instantiation& input,
                          const CompletionConfig& config) {
  if (config.id_base) return *config.id_base;
  return input.max_object_id() + 1;
}

std::string solution_key(const Instantiation& inst) {
  return serialize_facts(inst.to_facts());
}

std::vector<Arg> attribute_domain(const AttributeDecl& d,
                                  const CompletionConfig& config) {
  std::vector<Arg> dom;
  switch (d.base_type) {
    case AttrType::Integer: {
      long long lo, hi;
      if (d.min_value)
        lo = *d.min_value;
      else if (config.default_int_domain)
        lo = config.default_int_domain->first;
      else
        throw CompletionError("integer attribute '" + d.attr_id +
                              "' has no lower bound and no default domain");
      if (d.max_value)
        hi = *d.max_value;
      else if (config.default_int_domain)
        hi = config.default_int_domain->second;
      else
        throw CompletionError("integer attribute '" + d.attr_id +
                              "' has no upper bound and no default domain");
      for (long long v = lo; v <= hi; ++v) dom.emplace_back(v);
      break;
    }
    case AttrType::String:
      if (d.enum_values.empty())
        throw CompletionError("string attribute '" + d.attr_id +
                              "' has no enum values; domain is not finite");
      for (const std::string& v : d.enum_values) dom.emplace_back(v);
      break;
    case AttrType::Boolean:
      dom.emplace_back(std::string("false"));
      dom.emplace_back(std::string("true"));
      break;
  }
  return dom;
}

namespace {

struct LinkDecision {
  std::string assoc;
  long long o1;
  std::vector<long long> candidates;   // sorted C2-closure objects
  std::vector<long long> forced;       // input links from o1
  int min2, max2;
  bool last_of_assoc = false;
};

struct ValueDecision {
  long long obj;
  std::string attr;
  std::vector<Arg> domain;
};

class Search {
 public:
  Search(const Model& model, const Instantiation& input,
         const std::vector<ConstraintRule>& rules,
         const CompletionConfig& config,
         const std::optional<CreationCosts>& costs,
         std::optional<long long> budget, CompletionStats& stats,
         const std::function<bool(const Instantiation&, long long)>& on_solution)
      : model_(model), input_(input), rules_(rules), config_(config),
        costs_(costs), budget_(budget), stats_(stats),
        on_solution_(on_solution) {
    for (const ConstraintRule& r : rules_)
      if (r.persists_under_extension()) incremental_rules_.push_back(&r);
    id_base_ = default_id_base(input_, config_);
  }

  // returns false when the caller asked to stop
  bool run() {
    std::vector<std::string> creatable;
    std::set<std::string> leaves;
    for (const std::string& c : model_.leaf_classes()) leaves.insert(c);
    for (const auto& [cls, n] : config_.max_new_per_class) {
      if (!model_.has_class(cls))
        throw CompletionError("creation bound for unknown class '" + cls + "'");
      if (!leaves.count(cls))
        throw CompletionError("creation bound for non-leaf class '" + cls +
                              "'; only leaf classes may gain new objects");
      if (n < 0) throw CompletionError("negative creation bound");
    }
    for (const std::string& c : leaves)
      if (config_.bound(c) > 0) creatable.push_back(c);
    std::sort(creatable.begin(), creatable.end());

    // new-object counts per creatable class, lexicographic ascending
    std::vector<int> counts(creatable.size(), 0);
    for (;;) {
      if (!try_universe(creatable, counts)) return false;
      size_t i = counts.size();
      while (i > 0) {
        --i;
        if (counts[i] < config_.bound(creatable[i])) {
          ++counts[i];
          std::fill(counts.begin() + i + 1, counts.end(), 0);
          break;
        }
        if (i == 0) return true;
      }
      if (counts.empty()) return true;
    }
  }

 private:
  long long create_cost_isa() const { return costs_ ? costs_->isa : 0; }
  long long create_cost_link() const { return costs_ ? costs_->associated : 0; }
  long long create_cost_value() const {
    return costs_ ? costs_->attribute_value : 0;
  }
  bool over_budget(long long cost) const { return budget_ && cost > *budget_; }

  bool try_universe(const std::vector<std::string>& classes,
                    const std::vector<int>& counts) {
    ++stats_.nodes;
    work_ = input_;
    long long next_id = id_base_;
    long long cost = 0;
    for (size_t i = 0; i < classes.size(); ++i)
      for (int k = 0; k < counts[i]; ++k) {
        work_.add_object(next_id++, classes[i]);
        cost += create_cost_isa();
      }
    if (over_budget(cost)) return true;

    // objects grouped by inheritance closure
    auto instances_of = [&](const std::string& cls) {
      std::vector<long long> out;
      for (const auto& [o, c] : work_.objects())
        if (model_.has_class(c) && model_.is_subclass_of(c, cls))
          out.push_back(o);
      return out;
    };

    // link decisions, per association in id order, per C1 object in id order
    link_decisions_.clear();
    for (const auto& [aid, assoc] : model_.associations()) {
      std::vector<long long> c1s = instances_of(assoc.class1);
      std::vector<long long> c2s = instances_of(assoc.class2);
      // infeasible by construction: some C2 object can never reach min1
      if (assoc.min1 > 0 && !c2s.empty() &&
          static_cast<long long>(c1s.size()) * assoc.max2 <
              static_cast<long long>(assoc.min1))
        return true;
      for (size_t i = 0; i < c1s.size(); ++i) {
        LinkDecision d;
        d.assoc = aid;
        d.o1 = c1s[i];
        d.candidates = c2s;
        for (const auto& [a, o1, o2] : input_.links())
          if (a == aid && o1 == d.o1) d.forced.push_back(o2);
        std::sort(d.forced.begin(), d.forced.end());
        d.min2 = assoc.min2;
        d.max2 = assoc.max2;
        d.last_of_assoc = i + 1 == c1s.size();
        link_decisions_.push_back(std::move(d));
      }
    }

    // value decisions
    value_decisions_.clear();
    for (const auto& [o, cls] : work_.objects()) {
      if (!model_.has_class(cls)) continue;
      for (const AttributeDecl& d : model_.applicable_attributes(cls)) {
        bool has = false;
        for (const auto& [at, obj, v] : input_.values())
          if (at == d.attr_id && obj == o) has = true;
        if (has) continue;
        value_decisions_.push_back({o, d.attr_id, attribute_domain(d, config_)});
      }
    }

    // input links count toward C1-side partner totals
    partner1_.clear();
    for (const auto& [a, o1, o2] : input_.links()) partner1_[{a, o2}] += 1;
    return link_step(0, cost);
  }

  // count of C1-side partners accumulated per (assoc, o2)
  std::map<std::pair<std::string, long long>, int> partner1_;

  int max1_of(const std::string& aid) const {
    return model_.association(aid).max1;
  }
  int min1_of(const std::string& aid) const {
    return model_.association(aid).min1;
  }

  bool link_step(size_t idx, long long cost) {
    ++stats_.nodes;
    if (over_budget(cost)) return true;
    if (idx == link_decisions_.size()) return value_step(0, cost);
    const LinkDecision& d = link_decisions_[idx];

    // future decisions of the same association (for min1 feasibility)
    int future_o1 = 0;
    for (size_t j = idx + 1; j < link_decisions_.size(); ++j)
      if (link_decisions_[j].assoc == d.assoc) ++future_o1;

    std::vector<long long> extra_pool;
    for (long long o2 : d.candidates)
      if (!std::binary_search(d.forced.begin(), d.forced.end(), o2))
        extra_pool.push_back(o2);

    int forced_n = static_cast<int>(d.forced.size());
    if (forced_n > d.max2) return true;  // unreachable: input was pre-checked

    std::vector<long long> chosen;
    return choose_partners(idx, d, extra_pool, 0, forced_n, chosen, future_o1,
                           cost);
  }

  bool choose_partners(size_t idx, const LinkDecision& d,
                       const std::vector<long long>& pool, size_t pi, int n,
                       std::vector<long long>& chosen, int future_o1,
                       long long cost) {
    if (n <= d.max2 && n >= d.min2) {
      if (!commit_partners(idx, d, chosen, future_o1, cost)) return false;
    }
    if (n == d.max2) return true;
    for (size_t i = pi; i < pool.size(); ++i) {
      long long o2 = pool[i];
      auto key = std::make_pair(d.assoc, o2);
      if (partner1_[key] + 1 > max1_of(d.assoc)) continue;
      partner1_[key] += 1;
      work_.add_link({d.assoc, d.o1, o2});
      chosen.push_back(o2);
      bool cont = choose_partners(idx, d, pool, i + 1, n + 1, chosen, future_o1,
                                  cost + create_cost_link());
      chosen.pop_back();
      work_.remove_link({d.assoc, d.o1, o2});
      partner1_[key] -= 1;
      if (!cont) return false;
    }
    return true;
  }

  bool commit_partners(size_t idx, const LinkDecision& d,
                       const std::vector<long long>& chosen, int future_o1,
                       long long cost) {
    if (over_budget(cost)) return true;
    // min1 feasibility for partner objects of this association
    const Association& assoc = model_.association(d.assoc);
    if (assoc.min1 > 0) {
      for (long long o2 : d.candidates) {
        int have = 0;
        auto it = partner1_.find({d.assoc, o2});
        if (it != partner1_.end()) have = it->second;
        int possible = future_o1 * 1;  // each future o1 adds at most one link to o2
        if (have + possible < assoc.min1) return true;
      }
    }
    if (!incremental_rules_ok()) return true;
    return link_step(idx + 1, cost);
  }

  bool value_step(size_t idx, long long cost) {
    ++stats_.nodes;
    if (over_budget(cost)) return true;
    if (idx == value_decisions_.size()) return emit(cost);
    const ValueDecision& d = value_decisions_[idx];
    for (const Arg& v : d.domain) {
      work_.add_value({d.attr, d.obj, v});
      bool cont = true;
      if (incremental_rules_ok())
        cont = value_step(idx + 1, cost + create_cost_value());
      work_.remove_value({d.attr, d.obj, v});
      if (!cont) return false;
    }
    return true;
  }

  bool incremental_rules_ok() {
    for (const ConstraintRule* r : incremental_rules_)
      if (!evaluate_rule(*r, model_, work_).empty()) return false;
    return true;
  }

  bool emit(long long cost) {
    ValidationReport report =
        validate(model_, work_, rules_, ValidationMode::Complete);
    if (!report.valid()) return true;
    Instantiation canon = canonicalize_solution(input_, work_, id_base_);
    std::string key = solution_key(canon);
    if (!seen_.insert(key).second) return true;
    return on_solution_(canon, cost);
  }

  const Model& model_;
  const Instantiation& input_;
  const std::vector<ConstraintRule>& rules_;
  const CompletionConfig& config_;
  std::optional<CreationCosts> costs_;
  std::optional<long long> budget_;
  CompletionStats& stats_;
  const std::function<bool(const Instantiation&, long long)>& on_solution_;

  std::vector<const ConstraintRule*> incremental_rules_;
  long long id_base_ = 1;
  Instantiation work_;
  std::vector<LinkDecision> link_decisions_;
  std::vector<ValueDecision> value_decisions_;
  std::set<std::string> seen_;
};

}  // namespace

bool enumerate_completions(
    const Model& model, const Instantiation& inst,
    const std::vector<ConstraintRule>& rules, const CompletionConfig& config,
    const std::optional<CreationCosts>& costs, std::optional<long long> budget,
    CompletionStats& stats,
    const std::function<bool(const Instantiation&, long long)>& on_solution) {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  if (!validate_persistent(model, inst, rules).valid()) {
    ok = false;
  } else {
    Search s(model, inst, rules, config, costs, budget, stats, on_solution);
    s.run();
  }
  stats.wall_ms +=
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                t0)
          .count();
  return ok;
}

CompletionResult complete(const Model& model, const Instantiation& inst,
                          const std::vector<ConstraintRule>& rules,
                          const CompletionConfig& config) {
  if (inst.model_id() != model.id())
    throw SemanticError("instantiation '" + inst.id() +
                        "' does not instantiate model '" + model.id() + "'");
  CompletionResult result;
  bool ok = enumerate_completions(
      model, inst, rules, config, std::nullopt, std::nullopt, result.stats,
      [&](const Instantiation& sol, long long) {
        result.solutions.push_back(sol);
        return static_cast<int>(result.solutions.size()) < config.max_solutions;
      });
  if (!ok) {
    result.outcome = CompletionOutcome::InputInvalid;
    result.invalid_report = validate_persistent(model, inst, rules);
  } else if (result.solutions.empty()) {
    result.outcome = CompletionOutcome::UnsatWithinBounds;
  } else {
    result.outcome = CompletionOutcome::Sat;
  }
  return result;
}

ConsistencyResult check_model_consistency(
    const Model& model, const std::vector<ConstraintRule>& rules,
    const CompletionConfig& config) {
  Instantiation empty("witness", model.id());
  CompletionConfig cfg = config;
  cfg.max_solutions = 1;
  CompletionResult r = complete(model, empty, rules, cfg);
  ConsistencyResult out;
  out.stats = r.stats;
  out.consistent = r.outcome == CompletionOutcome::Sat;
  if (out.consistent) out.witness = r.solutions.front();
  return out;
}

Instantiation canonicalize_solution(const Instantiation& input,
                                    const Instantiation& solution,
                                    long long id_base) {
  // new objects grouped by class, classes in sorted order
  std::map<std::string, std::vector<long long>> groups;
  for (const auto& [o, cls] : solution.objects())
    if (!input.has_object(o)) groups[cls].push_back(o);
  if (groups.empty()) return solution;

  long long perms = 1;
  for (auto& [cls, objs] : groups) {
    std::sort(objs.begin(), objs.end());
    for (long long k = 2; k <= static_cast<long long>(objs.size()); ++k) {
      perms *= k;
      if (perms > 200000)
        throw CompletionError("canonicalization cap exceeded");
    }
  }

  // target ids per group, in class order
  std::map<std::string, long long> group_base;
  long long next = id_base;
  for (const auto& [cls, objs] : groups) {
    group_base[cls] = next;
    next += static_cast<long long>(objs.size());
  }

  auto rename = [&](const std::map<long long, long long>& map) {
    Instantiation out(solution.id(), solution.model_id());
    for (const auto& [o, cls] : solution.isa()) {
      auto it = map.find(o);
      out.add_object(it == map.end() ? o : it->second, cls);
    }
    for (const auto& [a, o1, o2] : solution.links()) {
      auto i1 = map.find(o1), i2 = map.find(o2);
      out.add_link({a, i1 == map.end() ? o1 : i1->second,
                    i2 == map.end() ? o2 : i2->second});
    }
    for (const auto& [at, o, v] : solution.values()) {
      auto it = map.find(o);
      out.add_value({at, it == map.end() ? o : it->second, v});
    }
    return out;
  };

  std::vector<std::pair<std::string, std::vector<long long>>> glist(
      groups.begin(), groups.end());
  std::optional<std::string> best_key;
  Instantiation best;
  std::map<long long, long long> mapping;

  std::function<void(size_t)> visit = [&](size_t gi) {
    if (gi == glist.size()) {
      Instantiation candidate = rename(mapping);
      std::string key = solution_key(candidate);
      if (!best_key || key < *best_key) {
        best_key = key;
        best = std::move(candidate);
      }
      return;
    }
    auto& [cls, objs] = glist[gi];
    std::vector<long long> perm = objs;
    std::sort(perm.begin(), perm.end());
    do {
      for (size_t j = 0; j < perm.size(); ++j)
        mapping[perm[j]] = group_base[cls] + static_cast<long long>(j);
      visit(gi + 1);
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (long long o : objs) mapping.erase(o);
  };
  visit(0);
  return best;
}

}  // namespace ooasp
