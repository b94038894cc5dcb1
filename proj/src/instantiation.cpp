#include "ooasp/instantiation.hpp"

#include <algorithm>

namespace ooasp {

namespace {
std::string str_arg(const Fact& f, size_t i) {
  return std::get<std::string>(f.args[i]);
}
long long int_arg(const Fact& f, size_t i) {
  return std::get<long long>(f.args[i]);
}

bool is_model_predicate(const std::string& p) {
  return p == "ooasp_class" || p == "ooasp_subclass" || p == "ooasp_assoc" ||
         p == "ooasp_attribute" || p == "ooasp_attribute_minInclusive" ||
         p == "ooasp_attribute_maxInclusive" || p == "ooasp_attribute_enum";
}
}  // namespace

Instantiation Instantiation::build(const std::string& inst_id,
                                   const Model& model,
                                   const std::vector<Fact>& facts,
                                   bool lenient) {
  Instantiation inst(inst_id, model.id());
  for (const Fact& f : facts) {
    if (f.predicate == "ooasp_isa") {
      std::string cls = str_arg(f, 1);
      long long o = int_arg(f, 2);
      if (!model.has_class(cls) && !lenient)
        throw SemanticError("isa fact for object " + std::to_string(o) +
                            " references unknown class '" + cls + "'");
      inst.isa_.emplace(o, cls);
    } else if (f.predicate == "ooasp_associated") {
      inst.links_.emplace(str_arg(f, 1), int_arg(f, 2), int_arg(f, 3));
    } else if (f.predicate == "ooasp_attribute_value") {
      inst.values_.emplace(str_arg(f, 1), int_arg(f, 2), f.args[3]);
    } else if (f.predicate == "ooasp_instantiation") {
      // marker; id agreement is the loader's concern
    } else {
      throw SemanticError("model-level fact in instantiation input: " +
                          fact_to_text(f));
    }
  }

  // normalize to one most-specific class per object
  std::map<long long, std::vector<std::string>> by_obj;
  for (const auto& [o, cls] : inst.isa_) by_obj[o].push_back(cls);
  for (const auto& [o, classes] : by_obj) {
    std::string best = classes.front();
    bool conflict = false;
    for (const std::string& c : classes) {
      if (c == best) continue;
      bool known = model.has_class(c) && model.has_class(best);
      if (known && model.is_subclass_of(c, best)) {
        best = c;
      } else if (!known || !model.is_subclass_of(best, c)) {
        conflict = true;
        if (c < best) best = c;  // deterministic pick, flagged below
      }
    }
    inst.objects_[o] = best;
    if (conflict) inst.conflicts_.insert(o);
  }
  return inst;
}

long long Instantiation::max_object_id() const {
  long long m = 0;
  for (const auto& [o, c] : objects_) m = std::max(m, o);
  for (const auto& [a, o1, o2] : links_) m = std::max({m, o1, o2});
  for (const auto& [a, o, v] : values_) m = std::max(m, o);
  return m;
}

void Instantiation::add_object(long long o, const std::string& cls) {
  objects_[o] = cls;
  isa_.emplace(o, cls);
}

std::vector<Fact> Instantiation::content_facts() const {
  std::vector<Fact> out;
  for (const auto& [o, cls] : isa_)
    out.push_back({"ooasp_isa", {inst_id_, cls, o}});
  for (const auto& [a, o1, o2] : links_)
    out.push_back({"ooasp_associated", {inst_id_, a, o1, o2}});
  for (const auto& [at, o, v] : values_)
    out.push_back({"ooasp_attribute_value", {inst_id_, at, o, v}});
  return out;
}

std::vector<Fact> Instantiation::to_facts() const {
  std::vector<Fact> out = content_facts();
  out.push_back({"ooasp_instantiation", {model_id_, inst_id_}});
  return out;
}

Session Session::load(const FactFile& file) {
  Session s;
  std::map<std::string, std::vector<Fact>> model_facts;
  for (const Fact& f : file.facts) {
    if (is_model_predicate(f.predicate)) {
      model_facts[std::get<std::string>(f.args[0])].push_back(f);
    } else if (f.predicate == "ooasp_instantiation") {
      std::string mid = std::get<std::string>(f.args[0]);
      std::string iid = std::get<std::string>(f.args[1]);
      auto [it, inserted] = s.instantiation_model.emplace(iid, mid);
      if (!inserted && it->second != mid)
        throw SemanticError("instantiation '" + iid +
                            "' declared for two models");
      s.instance_facts[iid];  // ensure entry exists even if empty
    }
  }
  for (const auto& [mid, facts] : model_facts) s.models.emplace(mid, Model::build(facts));
  for (const Fact& f : file.facts) {
    if (f.predicate == "ooasp_isa" || f.predicate == "ooasp_associated" ||
        f.predicate == "ooasp_attribute_value") {
      std::string iid = std::get<std::string>(f.args[0]);
      if (!s.instantiation_model.count(iid))
        throw SemanticError("fact references undeclared instantiation '" + iid +
                            "': " + fact_to_text(f));
      s.instance_facts[iid].push_back(f);
    }
  }
  return s;
}

Instantiation Session::instantiation(const std::string& inst_id,
                                     const Model* fallback_model) const {
  auto mit = instantiation_model.find(inst_id);
  if (mit == instantiation_model.end())
    throw SemanticError("unknown instantiation '" + inst_id + "'");
  auto fit = instance_facts.find(inst_id);
  static const std::vector<Fact> kEmpty;
  const std::vector<Fact>& facts = fit == instance_facts.end() ? kEmpty : fit->second;
  auto model_it = models.find(mit->second);
  if (model_it != models.end())
    return Instantiation::build(inst_id, model_it->second, facts);
  if (fallback_model)
    return Instantiation::build(inst_id, *fallback_model, facts, true);
  throw SemanticError("model '" + mit->second + "' of instantiation '" +
                      inst_id + "' is not part of the input");
}

}  // namespace ooasp
