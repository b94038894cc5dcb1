#include "ooasp/oracle.hpp"

#include <algorithm>

#include "ooasp/validate.hpp"

namespace ooasp {

namespace {

struct ValueSlot {
  long long obj;
  std::string attr;
  std::vector<Arg> domain;
};

// Exhaustive enumeration over one instantiation within config bounds.
void oracle_enumerate(const Model& model, const Instantiation& input,
                      const std::vector<ConstraintRule>& rules,
                      const CompletionConfig& config, int cap,
                      const std::function<void(const Instantiation&)>& yield) {
  std::vector<std::string> creatable;
  {
    std::set<std::string> leaves;
    for (const std::string& c : model.leaf_classes()) leaves.insert(c);
    for (const std::string& c : leaves)
      if (config.bound(c) > 0) creatable.push_back(c);
    std::sort(creatable.begin(), creatable.end());
  }
  long long id_base = default_id_base(input, config);

  std::vector<int> counts(creatable.size(), 0);
  for (;;) {
    // fixed universe for this count vector
    Instantiation base = input;
    long long next_id = id_base;
    int slots = 0;
    for (size_t i = 0; i < creatable.size(); ++i)
      for (int k = 0; k < counts[i]; ++k) {
        base.add_object(next_id++, creatable[i]);
        ++slots;
      }

    // candidate link pairs not already present in the input
    std::vector<Link> free_pairs;
    for (const auto& [aid, assoc] : model.associations()) {
      for (const auto& [o1, c1] : base.objects()) {
        if (!model.has_class(c1) || !model.is_subclass_of(c1, assoc.class1))
          continue;
        for (const auto& [o2, c2] : base.objects()) {
          if (!model.has_class(c2) || !model.is_subclass_of(c2, assoc.class2))
            continue;
          Link l{aid, o1, o2};
          if (!input.links().count(l)) free_pairs.push_back(l);
        }
      }
    }

    // open attribute slots
    std::vector<ValueSlot> value_slots;
    for (const auto& [o, cls] : base.objects()) {
      if (!model.has_class(cls)) continue;
      for (const AttributeDecl& d : model.applicable_attributes(cls)) {
        bool has = false;
        for (const auto& [at, obj, v] : input.values())
          if (at == d.attr_id && obj == o) has = true;
        if (!has)
          value_slots.push_back({o, d.attr_id, attribute_domain(d, config)});
      }
    }

    int points = slots + static_cast<int>(free_pairs.size()) +
                 static_cast<int>(value_slots.size());
    if (points > cap)
      throw OracleCapExceeded("oracle decision-point cap exceeded: " +
                              std::to_string(points) + " > " +
                              std::to_string(cap));

    // every link subset x every value tuple
    unsigned long long link_combos = 1ULL << free_pairs.size();
    for (unsigned long long mask = 0; mask < link_combos; ++mask) {
      Instantiation cand = base;
      for (size_t i = 0; i < free_pairs.size(); ++i)
        if (mask & (1ULL << i)) cand.add_link(free_pairs[i]);

      std::vector<size_t> odo(value_slots.size(), 0);
      for (;;) {
        Instantiation full = cand;
        for (size_t i = 0; i < value_slots.size(); ++i)
          full.add_value(
              {value_slots[i].attr, value_slots[i].obj, value_slots[i].domain[odo[i]]});
        if (validate(model, full, rules, ValidationMode::Complete).valid())
          yield(full);
        size_t i = odo.size();
        bool done = true;
        while (i > 0) {
          --i;
          if (++odo[i] < value_slots[i].domain.size()) {
            std::fill(odo.begin() + i + 1, odo.end(), 0);
            done = false;
            break;
          }
          odo[i] = 0;
        }
        if (done) break;
      }
    }

    // next count vector
    size_t i = counts.size();
    bool done = true;
    while (i > 0) {
      --i;
      if (counts[i] < config.bound(creatable[i])) {
        ++counts[i];
        std::fill(counts.begin() + i + 1, counts.end(), 0);
        done = false;
        break;
      }
      counts[i] = 0;
    }
    if (done) break;
  }
}

}  // namespace

std::set<std::string> enumerate_completions_bruteforce(
    const Model& model, const Instantiation& inst,
    const std::vector<ConstraintRule>& rules, const CompletionConfig& config,
    int cap) {
  std::set<std::string> out;
  long long id_base = default_id_base(inst, config);
  oracle_enumerate(model, inst, rules, config, cap,
                   [&](const Instantiation& sol) {
                     out.insert(solution_key(
                         canonicalize_solution(inst, sol, id_base)));
                   });
  return out;
}

std::optional<long long> min_repair_cost_bruteforce(
    const Instantiation& legacy, const Model& target_model,
    const std::vector<ConstraintRule>& rules, const CostTable& costs,
    const CompletionConfig& config, int cap) {
  std::vector<Fact> facts = legacy.content_facts();
  std::sort(facts.begin(), facts.end());
  size_t n = facts.size();
  if (n > 20)
    throw OracleCapExceeded("too many legacy facts for brute force");

  CompletionConfig cfg = config;
  if (!cfg.id_base) cfg.id_base = legacy.max_object_id() + 1;

  std::optional<long long> best;
  for (unsigned long long mask = 0; mask < (1ULL << n); ++mask) {
    long long decision_cost = 0;
    std::vector<Fact> reused;
    for (size_t i = 0; i < n; ++i) {
      if (mask & (1ULL << i)) {
        reused.push_back(facts[i]);
        decision_cost += costs.at(ChangeAction::Reuse, fact_kind_of(facts[i]));
      } else {
        decision_cost += costs.at(ChangeAction::Delete, fact_kind_of(facts[i]));
      }
    }
    if (best && decision_cost >= *best) continue;

    Instantiation input =
        Instantiation::build(legacy.id(), target_model, reused, /*lenient=*/true);
    std::set<Fact> reused_set(reused.begin(), reused.end());
    oracle_enumerate(target_model, input, rules, cfg, cap - static_cast<int>(n),
                     [&](const Instantiation& sol) {
                       long long created_cost = 0;
                       for (const Fact& f : sol.content_facts())
                         if (!reused_set.count(f))
                           created_cost += costs.at(ChangeAction::Create,
                                                    fact_kind_of(f));
                       long long total = decision_cost + created_cost;
                       if (!best || total < *best) best = total;
                     });
  }
  return best;
}

}  // namespace ooasp
