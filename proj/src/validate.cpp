#include "ooasp/validate.hpp"

#include <json.hpp>

namespace ooasp {

namespace {

void add(ValidationReport& r, Violation v) { r.violations.insert(std::move(v)); }

bool typed_as(const Model& model, const Instantiation& inst, long long o,
              const std::string& cls) {
  const std::string* c = inst.class_of(o);
  return c && model.has_class(*c) && model.is_subclass_of(*c, cls);
}

void check_cardinalities(const Model& model, const Instantiation& inst,
                         ValidationMode mode, ValidationReport& r) {
  for (const auto& [aid, assoc] : model.associations()) {
    for (const auto& [o, cls] : inst.objects()) {
      if (!model.has_class(cls)) continue;
      // o at the C1 endpoint: count well-typed C2 partners
      if (model.is_subclass_of(cls, assoc.class1)) {
        int n = 0;
        for (const auto& [a, o1, o2] : inst.links())
          if (a == aid && o1 == o && typed_as(model, inst, o2, assoc.class2))
            ++n;
        if (n < assoc.min2 && assoc.min2 > 0 && mode == ValidationMode::Complete)
          add(r, {"mincardviolated", {o, aid}, "c1",
                  "object " + std::to_string(o) + " has " + std::to_string(n) +
                      " " + assoc.class2 + " partners, needs at least " +
                      std::to_string(assoc.min2)});
        if (n > assoc.max2)
          add(r, {"maxcardviolated", {o, aid}, "c1",
                  "object " + std::to_string(o) + " has " + std::to_string(n) +
                      " " + assoc.class2 + " partners, allows at most " +
                      std::to_string(assoc.max2)});
      }
      // o at the C2 endpoint: count well-typed C1 partners
      if (model.is_subclass_of(cls, assoc.class2)) {
        int n = 0;
        for (const auto& [a, o1, o2] : inst.links())
          if (a == aid && o2 == o && typed_as(model, inst, o1, assoc.class1))
            ++n;
        if (n < assoc.min1 && assoc.min1 > 0 && mode == ValidationMode::Complete)
          add(r, {"mincardviolated", {o, aid}, "c2",
                  "object " + std::to_string(o) + " has " + std::to_string(n) +
                      " " + assoc.class1 + " partners, needs at least " +
                      std::to_string(assoc.min1)});
        if (n > assoc.max1)
          add(r, {"maxcardviolated", {o, aid}, "c2",
                  "object " + std::to_string(o) + " has " + std::to_string(n) +
                      " " + assoc.class1 + " partners, allows at most " +
                      std::to_string(assoc.max1)});
      }
    }
  }
}

void check_links(const Model& model, const Instantiation& inst,
                 ValidationReport& r) {
  for (const auto& [aid, o1, o2] : inst.links()) {
    bool d1 = !inst.has_object(o1);
    bool d2 = !inst.has_object(o2);
    if (d1) add(r, {"dangling_reference", {o1}, {}, "link endpoint has no isa fact"});
    if (d2) add(r, {"dangling_reference", {o2}, {}, "link endpoint has no isa fact"});
    if (!model.has_association(aid)) {
      add(r, {"assoc_type_violated", {aid, o1, o2}, {},
              "association '" + aid + "' is not declared by the model"});
      continue;
    }
    const Association& a = model.association(aid);
    if ((!d1 && !typed_as(model, inst, o1, a.class1)) ||
        (!d2 && !typed_as(model, inst, o2, a.class2)))
      add(r, {"assoc_type_violated", {aid, o1, o2}, {},
              "link endpoints are not instances of " + a.class1 + "/" +
                  a.class2});
  }
}

void check_values(const Model& model, const Instantiation& inst,
                  ValidationMode mode, ValidationReport& r) {
  for (const auto& [at, o, val] : inst.values()) {
    if (!inst.has_object(o)) {
      add(r, {"dangling_reference", {o}, {}, "value fact names an object with no isa fact"});
      continue;
    }
    const std::string& cls = *inst.class_of(o);
    const AttributeDecl* d =
        model.has_class(cls) ? model.find_attribute(cls, at) : nullptr;
    if (!d) {
      add(r, {"attr_unknown_value_type", {o, at, val}, {},
              "attribute '" + at + "' is not applicable to class " + cls});
      continue;
    }
    bool is_int = std::holds_alternative<long long>(val);
    switch (d->base_type) {
      case AttrType::Integer:
        if (!is_int) {
          add(r, {"attr_unknown_value_type", {o, at, val}, {},
                  "integer attribute holds a non-integer value"});
        } else {
          long long v = std::get<long long>(val);
          if ((d->min_value && v < *d->min_value) ||
              (d->max_value && v > *d->max_value))
            add(r, {"attr_range_violated", {o, at, val}, {},
                    "value " + std::to_string(v) + " outside declared range"});
        }
        break;
      case AttrType::String:
        if (is_int)
          add(r, {"attr_unknown_value_type", {o, at, val}, {},
                  "string attribute holds an integer value"});
        else if (!d->enum_values.empty() &&
                 !d->enum_values.count(std::get<std::string>(val)))
          add(r, {"attr_enum_violated", {o, at, val}, {},
                  "value not among the declared enum values"});
        break;
      case AttrType::Boolean:
        if (is_int || (std::get<std::string>(val) != "true" &&
                       std::get<std::string>(val) != "false"))
          add(r, {"attr_unknown_value_type", {o, at, val}, {},
                  "boolean attribute must be \"true\" or \"false\""});
        break;
    }
  }

  // multiplicity and (complete mode) coverage per applicable attribute
  for (const auto& [o, cls] : inst.objects()) {
    if (!model.has_class(cls)) continue;
    for (const AttributeDecl& d : model.applicable_attributes(cls)) {
      int n = 0;
      for (const auto& [at, obj, val] : inst.values())
        if (at == d.attr_id && obj == o) ++n;
      if (n == 0 && mode == ValidationMode::Complete)
        add(r, {"attr_missing", {o, d.attr_id}, {},
                "no value for applicable attribute"});
      if (n > 1)
        add(r, {"attr_multiple", {o, d.attr_id}, {},
                "more than one value for attribute"});
    }
  }
}

}  // namespace

bool ValidationReport::has(const std::string& kind,
                           const std::vector<Arg>& args) const {
  for (const Violation& v : violations)
    if (v.kind == kind && v.args == args) return true;
  return false;
}

ValidationReport validate(const Model& model, const Instantiation& inst,
                          const std::vector<ConstraintRule>& rules,
                          ValidationMode mode) {
  if (inst.model_id() != model.id())
    throw SemanticError("instantiation '" + inst.id() + "' instantiates model '" +
                        inst.model_id() + "', not '" + model.id() + "'");
  ValidationReport r;
  r.inst_id = inst.id();
  r.mode = mode;
  // only reachable through lenient instantiation builds
  for (const auto& [o, cls] : inst.isa())
    if (!model.has_class(cls))
      add(r, {"unknown_class", {o, cls}, {},
              "object declared with a class the model does not define"});
  check_cardinalities(model, inst, mode, r);
  check_links(model, inst, r);
  check_values(model, inst, mode, r);
  for (long long o : inst.classification_conflicts())
    add(r, {"multiple_classification", {o}, {},
            "object declared with incomparable classes"});
  for (const GroundViolation& g : evaluate_constraints(rules, model, inst))
    add(r, {g.kind, g.args, {}, "domain-specific constraint"});
  return r;
}

ValidationReport validate_persistent(const Model& model,
                                     const Instantiation& inst,
                                     const std::vector<ConstraintRule>& rules) {
  std::vector<ConstraintRule> persistent;
  for (const ConstraintRule& r : rules)
    if (r.persists_under_extension()) persistent.push_back(r);
  return validate(model, inst, persistent, ValidationMode::Partial);
}

std::vector<Fact> violations_to_facts(const ValidationReport& report) {
  std::vector<Fact> out;
  for (const Violation& v : report.violations) {
    Fact f;
    f.predicate = "ooasp_cv";
    f.args = {report.inst_id};
    f.cv = CvAtom{v.kind, v.args};
    out.push_back(std::move(f));
  }
  return out;
}

std::string report_to_json(const ValidationReport& report) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["instantiation"] = report.inst_id;
  j["mode"] = report.mode == ValidationMode::Partial ? "partial" : "complete";
  j["valid"] = report.valid();
  j["violations"] = nlohmann::json::array();
  for (const Violation& v : report.violations) {
    nlohmann::json e;
    e["kind"] = v.kind;
    e["args"] = nlohmann::json::array();
    for (const Arg& a : v.args) {
      if (std::holds_alternative<long long>(a))
        e["args"].push_back(std::get<long long>(a));
      else
        e["args"].push_back(std::get<std::string>(a));
    }
    if (v.side) e["side"] = *v.side;
    e["message"] = v.message;
    j["violations"].push_back(std::move(e));
  }
  return j.dump(2);
}

}  // namespace ooasp
