#include <doctest.h>

#include <random>
#include <sstream>

#include "helpers.hpp"
#include "ooasp/complete.hpp"
#include "ooasp/oracle.hpp"
#include "ooasp/reconcile.hpp"
#include "ooasp/validate.hpp"

using namespace ooasp;

namespace {

struct Rng {
  std::mt19937 gen;
  explicit Rng(unsigned seed) : gen(seed) {}
  int pick(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(gen);
  }
  bool coin(double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(gen) < p;
  }
  template <typename T>
  const T& choice(const std::vector<T>& xs) {
    return xs[static_cast<size_t>(pick(0, static_cast<int>(xs.size()) - 1))];
  }
};

struct Scenario {
  Model model;
  Instantiation inst;
  std::vector<ConstraintRule> rules;
  CompletionConfig config;
};

// Small random universe: classes A (sometimes with subclass B) and C, at most
// one association, at most one attribute with a two-value domain, a few
// objects, and creation bounds that keep exhaustive enumeration cheap.
Scenario random_scenario(Rng& rng) {
  Scenario s;
  bool with_b = rng.coin(0.5);
  std::ostringstream m;
  m << "ooasp_class(\"m\",\"A\").\n";
  m << "ooasp_class(\"m\",\"C\").\n";
  if (with_b) {
    m << "ooasp_class(\"m\",\"B\").\n";
    m << "ooasp_subclass(\"m\",\"B\",\"A\").\n";
  }
  std::vector<std::string> leaves = with_b
                                        ? std::vector<std::string>{"B", "C"}
                                        : std::vector<std::string>{"A", "C"};
  std::vector<std::string> all = {"A", "C"};
  if (with_b) all.push_back("B");

  bool with_assoc = rng.coin(0.8);
  if (with_assoc) {
    std::string c1 = rng.choice(all);
    std::string c2 = rng.choice(all);
    int min1 = rng.pick(0, 1), min2 = rng.pick(0, 1);
    int max1 = min1 + rng.pick(min1 == 0 ? 1 : 0, 1);
    int max2 = min2 + rng.pick(min2 == 0 ? 1 : 0, 1);
    m << "ooasp_assoc(\"m\",\"r\",\"" << c1 << "\"," << min1 << "," << max1
      << ",\"" << c2 << "\"," << min2 << "," << max2 << ").\n";
  }

  int attr_style = rng.pick(0, 2);  // none / integer / enum
  if (attr_style == 1) {
    std::string owner = rng.choice(all);
    m << "ooasp_attribute(\"m\",\"" << owner << "\",\"n\",\"integer\").\n";
    m << "ooasp_attribute_minInclusive(\"m\",\"" << owner << "\",\"n\",1).\n";
    m << "ooasp_attribute_maxInclusive(\"m\",\"" << owner << "\",\"n\",2).\n";
  } else if (attr_style == 2) {
    std::string owner = rng.choice(all);
    m << "ooasp_attribute(\"m\",\"" << owner << "\",\"n\",\"string\").\n";
    m << "ooasp_attribute_enum(\"m\",\"" << owner << "\",\"n\",\"x\").\n";
    m << "ooasp_attribute_enum(\"m\",\"" << owner << "\",\"n\",\"y\").\n";
  }
  s.model = Model::build(parse_facts(m.str()).facts);

  std::ostringstream i;
  int objects = rng.pick(0, 2);
  for (int o = 1; o <= objects; ++o) {
    // occasionally classify at a non-leaf class
    const std::string& cls = rng.coin(0.15) ? all[0] : rng.choice(leaves);
    i << "ooasp_isa(\"c\",\"" << cls << "\"," << o << ").\n";
  }
  if (objects >= 1 && with_assoc && rng.coin(0.4))
    i << "ooasp_associated(\"c\",\"r\"," << rng.pick(1, objects) << ","
      << rng.pick(1, objects) << ").\n";
  if (objects >= 1 && attr_style != 0 && rng.coin(0.4)) {
    i << "ooasp_attribute_value(\"c\",\"n\"," << rng.pick(1, objects) << ",";
    if (attr_style == 1)
      i << rng.pick(1, 3);  // sometimes out of range
    else
      i << (rng.coin(0.8) ? "\"x\"" : "\"z\"");
    i << ").\n";
  }
  s.inst = Instantiation::build("c", s.model, parse_facts(i.str()).facts);

  int budget = 3 - objects;  // keep the object universe at three or fewer
  for (const std::string& leaf : leaves) {
    int b = rng.pick(0, budget);
    budget -= b;
    if (b > 0) s.config.max_new_per_class[leaf] = b;
  }

  if (with_assoc && rng.coin(0.3))
    s.rules = parse_constraints(
        "cv linked(X, Y) :- associated(\"r\", X, Y), isa(X, \"A\").");
  else if (rng.coin(0.2))
    s.rules = parse_constraints(
        "cv lonely(X) :- isa(X, \"C\"), not isa(X, \"A\").");
  return s;
}

std::set<std::string> engine_solutions(const Scenario& s, bool& input_ok) {
  std::set<std::string> keys;
  CompletionStats stats;
  input_ok = enumerate_completions(
      s.model, s.inst, s.rules, s.config, std::nullopt, std::nullopt, stats,
      [&](const Instantiation& sol, long long) {
        keys.insert(solution_key(sol));
        return true;
      });
  return keys;
}

}  // namespace

TEST_CASE("completion agrees with brute-force enumeration") {
  Rng rng(20240901);
  int compared = 0, attempts = 0, nonempty = 0, invalid = 0;
  while (compared < 220 && attempts < 2000) {
    ++attempts;
    Scenario s = random_scenario(rng);
    std::set<std::string> expected;
    try {
      expected = enumerate_completions_bruteforce(s.model, s.inst, s.rules,
                                                  s.config);
    } catch (const OracleCapExceeded&) {
      continue;
    }
    bool input_ok = false;
    std::set<std::string> got = engine_solutions(s, input_ok);
    CAPTURE(attempts);
    CAPTURE(serialize_facts(s.model.to_facts()));
    CAPTURE(serialize_facts(s.inst.to_facts()));
    if (!input_ok) {
      ++invalid;
      CHECK(expected.empty());
    } else {
      CHECK(got == expected);
    }
    if (!expected.empty()) ++nonempty;
    ++compared;
  }
  CHECK(compared >= 220);
  CHECK(nonempty > 50);   // the generator exercises satisfiable cases
  CHECK(invalid > 5);     // ... and unfixable inputs
}

TEST_CASE("completion solutions satisfy the structural invariants") {
  Rng rng(77001);
  int solutions_seen = 0;
  for (int attempts = 0; attempts < 400 && solutions_seen < 300; ++attempts) {
    Scenario s = random_scenario(rng);
    bool input_ok = false;
    CompletionStats stats;
    std::vector<Instantiation> sols;
    input_ok = enumerate_completions(
        s.model, s.inst, s.rules, s.config, std::nullopt, std::nullopt, stats,
        [&](const Instantiation& sol, long long) {
          sols.push_back(sol);
          return sols.size() < 50;
        });
    if (!input_ok) continue;
    for (const Instantiation& sol : sols) {
      ++solutions_seen;
      // superset of the input
      for (const auto& p : s.inst.isa()) CHECK(sol.isa().count(p) == 1);
      for (const auto& l : s.inst.links()) CHECK(sol.links().count(l) == 1);
      for (const auto& v : s.inst.values()) CHECK(sol.values().count(v) == 1);
      // clean under complete-mode validation
      CHECK(validate(s.model, sol, s.rules, ValidationMode::Complete).valid());
      // serialized form round-trips
      std::string text = serialize_facts(sol.to_facts());
      CHECK(serialize_facts(parse_facts(text).facts) == text);
    }
  }
  CHECK(solutions_seen >= 300);
}

TEST_CASE("reconciliation cost agrees with the brute-force minimum") {
  Rng rng(5150);
  int compared = 0, attempts = 0, repaired = 0;
  while (compared < 220 && attempts < 2000) {
    ++attempts;
    Scenario s = random_scenario(rng);

    // derive a legacy variant: the generated instantiation plus, at times, a
    // classification the target model does not know
    std::vector<Fact> legacy_facts = s.inst.content_facts();
    if (rng.coin(0.25)) {
      Fact ghost{"ooasp_isa",
                 {Arg{std::string("c")}, Arg{std::string("Ghost")}, Arg{9LL}}};
      legacy_facts.push_back(ghost);
    }
    if (legacy_facts.size() > 5) continue;
    Instantiation legacy =
        Instantiation::build("c", s.model, legacy_facts, /*lenient=*/true);

    CostTable costs;
    if (rng.coin(0.3)) {
      costs.at(ChangeAction::Delete, FactKind::Isa) = rng.pick(0, 2);
      costs.at(ChangeAction::Create, FactKind::Associated) = rng.pick(1, 2);
      costs.at(ChangeAction::Delete, FactKind::AttributeValue) = rng.pick(0, 2);
    }

    std::optional<long long> expected;
    try {
      expected =
          min_repair_cost_bruteforce(legacy, s.model, s.rules, costs, s.config);
    } catch (const OracleCapExceeded&) {
      continue;
    }
    ReconcileResult got = reconcile(legacy, s.model, s.rules, costs, s.config);
    CAPTURE(attempts);
    CAPTURE(serialize_facts(s.model.to_facts()));
    CAPTURE(serialize_facts(legacy.to_facts()));
    REQUIRE(got.change_set.has_value() == expected.has_value());
    if (expected) {
      CHECK(got.change_set->total_cost == *expected);
      if (*expected > 0) ++repaired;

      // change-set invariants: partition of the legacy facts, coherent result
      const ChangeSet& cs = *got.change_set;
      std::set<Fact> reused(cs.reused.begin(), cs.reused.end());
      std::set<Fact> deleted(cs.deleted.begin(), cs.deleted.end());
      CHECK(reused.size() + deleted.size() == reify(legacy).size());
      for (const Fact& f : deleted) CHECK(reused.count(f) == 0);
      std::set<Fact> result_facts;
      for (const Fact& f : cs.result.content_facts()) result_facts.insert(f);
      for (const Fact& f : reused) CHECK(result_facts.count(f) == 1);
      for (const Fact& f : cs.created) CHECK(result_facts.count(f) == 1);
      for (const Fact& f : deleted) CHECK(result_facts.count(f) == 0);
      CHECK(result_facts.size() == reused.size() + cs.created.size());
      CHECK(
          validate(s.model, cs.result, s.rules, ValidationMode::Complete).valid());
    }
    ++compared;
  }
  CHECK(compared >= 220);
  CHECK(repaired > 20);
}
