#include "ooasp/model.hpp"

#include <algorithm>
#include <sstream>

namespace ooasp {

namespace {

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

std::string str_arg(const Fact& f, size_t i) {
  return std::get<std::string>(f.args[i]);
}
long long int_arg(const Fact& f, size_t i) {
  return std::get<long long>(f.args[i]);
}

}  // namespace

IllFormedModel::IllFormedModel(std::vector<std::string> diags)
    : std::runtime_error("ill-formed model: " + join(diags, "; ")),
      diagnostics(std::move(diags)) {}

Model Model::build(const std::vector<Fact>& declarations) {
  Model m;
  std::vector<std::string> diags;
  std::map<std::pair<std::string, std::string>, AttributeDecl> attrs;

  for (const Fact& f : declarations) {
    if (f.args.empty() || !std::holds_alternative<std::string>(f.args[0])) {
      diags.push_back("not a model-level fact: " + fact_to_text(f));
      continue;
    }
    std::string mid = str_arg(f, 0);
    if (m.model_id_.empty()) m.model_id_ = mid;
    if (mid != m.model_id_) {
      diags.push_back("mixed model ids '" + m.model_id_ + "' and '" + mid + "'");
      continue;
    }
    if (f.predicate == "ooasp_class") {
      if (!m.classes_.insert(str_arg(f, 1)).second)
        diags.push_back("duplicate class '" + str_arg(f, 1) + "'");
    } else if (f.predicate == "ooasp_subclass") {
      std::string c = str_arg(f, 1), sc = str_arg(f, 2);
      auto [it, inserted] = m.parent_.emplace(c, sc);
      if (!inserted && it->second != sc)
        diags.push_back("class '" + c + "' has more than one superclass");
    } else if (f.predicate == "ooasp_assoc") {
      Association a;
      a.assoc_id = str_arg(f, 1);
      a.class1 = str_arg(f, 2);
      a.min1 = static_cast<int>(int_arg(f, 3));
      a.max1 = static_cast<int>(int_arg(f, 4));
      a.class2 = str_arg(f, 5);
      a.min2 = static_cast<int>(int_arg(f, 6));
      a.max2 = static_cast<int>(int_arg(f, 7));
      if (a.min1 < 0 || a.min2 < 0 || a.min1 > a.max1 || a.min2 > a.max2)
        diags.push_back("bad cardinality bounds on association '" + a.assoc_id +
                        "'");
      if (!m.associations_.emplace(a.assoc_id, a).second)
        diags.push_back("duplicate association '" + a.assoc_id + "'");
    } else if (f.predicate == "ooasp_attribute") {
      AttributeDecl d;
      d.owner_class = str_arg(f, 1);
      d.attr_id = str_arg(f, 2);
      std::string ty = str_arg(f, 3);
      if (ty == "string")
        d.base_type = AttrType::String;
      else if (ty == "integer")
        d.base_type = AttrType::Integer;
      else if (ty == "boolean")
        d.base_type = AttrType::Boolean;
      else
        diags.push_back("attribute '" + d.attr_id + "' has unknown type '" + ty +
                        "'");
      if (!attrs.emplace(std::make_pair(d.owner_class, d.attr_id), d).second)
        diags.push_back("duplicate attribute '" + d.attr_id + "' on class '" +
                        d.owner_class + "'");
    } else if (f.predicate == "ooasp_attribute_minInclusive" ||
               f.predicate == "ooasp_attribute_maxInclusive" ||
               f.predicate == "ooasp_attribute_enum") {
      // resolved below, after all ooasp_attribute facts are known
    } else {
      diags.push_back("instance-level fact in model input: " + fact_to_text(f));
    }
  }

  // attribute refinements
  for (const Fact& f : declarations) {
    if (f.predicate != "ooasp_attribute_minInclusive" &&
        f.predicate != "ooasp_attribute_maxInclusive" &&
        f.predicate != "ooasp_attribute_enum")
      continue;
    auto it = attrs.find({str_arg(f, 1), str_arg(f, 2)});
    if (it == attrs.end()) {
      diags.push_back("range/enum for undeclared attribute '" + str_arg(f, 2) +
                      "' of class '" + str_arg(f, 1) + "'");
      continue;
    }
    AttributeDecl& d = it->second;
    if (f.predicate == "ooasp_attribute_enum") {
      if (d.base_type != AttrType::String)
        diags.push_back("enum value on non-string attribute '" + d.attr_id + "'");
      else
        d.enum_values.insert(str_arg(f, 3));
    } else {
      if (d.base_type != AttrType::Integer) {
        diags.push_back("range bound on non-integer attribute '" + d.attr_id +
                        "'");
      } else if (f.predicate == "ooasp_attribute_minInclusive") {
        d.min_value = int_arg(f, 3);
      } else {
        d.max_value = int_arg(f, 3);
      }
    }
  }
  for (auto& [key, d] : attrs) {
    if (d.min_value && d.max_value && *d.min_value > *d.max_value)
      diags.push_back("empty range on attribute '" + d.attr_id + "'");
    m.attributes_.push_back(d);
  }

  // referential checks
  for (const auto& [c, sc] : m.parent_) {
    if (!m.classes_.count(c))
      diags.push_back("subclass fact references undeclared class '" + c + "'");
    if (!m.classes_.count(sc))
      diags.push_back("subclass fact references undeclared class '" + sc + "'");
  }
  for (const auto& [id, a] : m.associations_) {
    if (!m.classes_.count(a.class1))
      diags.push_back("association '" + id + "' references undeclared class '" +
                      a.class1 + "'");
    if (!m.classes_.count(a.class2))
      diags.push_back("association '" + id + "' references undeclared class '" +
                      a.class2 + "'");
  }
  for (const AttributeDecl& d : m.attributes_) {
    if (!m.classes_.count(d.owner_class))
      diags.push_back("attribute '" + d.attr_id +
                      "' declared on undeclared class '" + d.owner_class + "'");
  }

  // cycle detection over the parent relation
  for (const std::string& c : m.classes_) {
    std::set<std::string> seen;
    std::string cur = c;
    while (m.parent_.count(cur)) {
      if (!seen.insert(cur).second) {
        diags.push_back("subclass cycle through '" + c + "'");
        break;
      }
      cur = m.parent_.at(cur);
    }
  }

  if (diags.empty()) {
    // duplicate attribute ids along an inheritance chain
    for (const std::string& c : m.classes_) {
      std::set<std::string> ids;
      for (const std::string& a : m.ancestors(c)) {
        for (const AttributeDecl& d : m.attributes_) {
          if (d.owner_class == a && !ids.insert(d.attr_id).second)
            diags.push_back("attribute '" + d.attr_id +
                            "' declared twice along the chain of '" + c + "'");
        }
      }
    }
  }

  std::sort(diags.begin(), diags.end());
  diags.erase(std::unique(diags.begin(), diags.end()), diags.end());
  if (!diags.empty()) throw IllFormedModel(std::move(diags));
  if (m.model_id_.empty()) throw IllFormedModel({"no model facts given"});
  return m;
}

const Association& Model::association(const std::string& a) const {
  auto it = associations_.find(a);
  if (it == associations_.end())
    throw std::out_of_range("unknown association '" + a + "'");
  return it->second;
}

std::vector<std::string> Model::ancestors(const std::string& c) const {
  if (!classes_.count(c)) throw std::out_of_range("unknown class '" + c + "'");
  std::vector<std::string> chain;
  std::string cur = c;
  for (;;) {
    chain.push_back(cur);
    auto it = parent_.find(cur);
    if (it == parent_.end()) break;
    cur = it->second;
  }
  return chain;
}

bool Model::is_subclass_of(const std::string& c,
                           const std::string& ancestor) const {
  for (const std::string& a : ancestors(c))
    if (a == ancestor) return true;
  return false;
}

std::vector<AttributeDecl> Model::applicable_attributes(
    const std::string& c) const {
  std::vector<AttributeDecl> out;
  for (const std::string& a : ancestors(c)) {
    std::vector<AttributeDecl> here;
    for (const AttributeDecl& d : attributes_)
      if (d.owner_class == a) here.push_back(d);
    std::sort(here.begin(), here.end(),
              [](const AttributeDecl& x, const AttributeDecl& y) {
                return x.attr_id < y.attr_id;
              });
    out.insert(out.end(), here.begin(), here.end());
  }
  return out;
}

const AttributeDecl* Model::find_attribute(const std::string& c,
                                           const std::string& attr_id) const {
  for (const std::string& a : ancestors(c))
    for (const AttributeDecl& d : attributes_)
      if (d.owner_class == a && d.attr_id == attr_id) return &d;
  return nullptr;
}

bool Model::has_attribute_anywhere(const std::string& attr_id) const {
  for (const AttributeDecl& d : attributes_)
    if (d.attr_id == attr_id) return true;
  return false;
}

std::vector<std::string> Model::leaf_classes() const {
  std::set<std::string> parents;
  for (const auto& [c, sc] : parent_) parents.insert(sc);
  std::vector<std::string> out;
  for (const std::string& c : classes_)
    if (!parents.count(c)) out.push_back(c);
  return out;
}

std::vector<Fact> Model::to_facts() const {
  std::vector<Fact> out;
  for (const std::string& c : classes_)
    out.push_back({"ooasp_class", {model_id_, c}});
  for (const auto& [c, sc] : parent_)
    out.push_back({"ooasp_subclass", {model_id_, c, sc}});
  for (const auto& [id, a] : associations_)
    out.push_back({"ooasp_assoc",
                   {model_id_, id, a.class1, (long long)a.min1, (long long)a.max1,
                    a.class2, (long long)a.min2, (long long)a.max2}});
  for (const AttributeDecl& d : attributes_) {
    std::string ty = d.base_type == AttrType::String    ? "string"
                     : d.base_type == AttrType::Integer ? "integer"
                                                        : "boolean";
    out.push_back({"ooasp_attribute", {model_id_, d.owner_class, d.attr_id, ty}});
    if (d.min_value)
      out.push_back({"ooasp_attribute_minInclusive",
                     {model_id_, d.owner_class, d.attr_id, *d.min_value}});
    if (d.max_value)
      out.push_back({"ooasp_attribute_maxInclusive",
                     {model_id_, d.owner_class, d.attr_id, *d.max_value}});
    for (const std::string& v : d.enum_values)
      out.push_back({"ooasp_attribute_enum",
                     {model_id_, d.owner_class, d.attr_id, v}});
  }
  return out;
}

}  // namespace ooasp
