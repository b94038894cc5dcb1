#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ooasp/fact.hpp"

namespace ooasp {

enum class AttrType { String, Integer, Boolean };

struct Association {
  std::string assoc_id;
  std::string class1;
  int min1 = 0, max1 = 0;  // bounds on C1-partners of each C2 instance
  std::string class2;
  int min2 = 0, max2 = 0;  // bounds on C2-partners of each C1 instance
};

struct AttributeDecl {
  std::string owner_class;
  std::string attr_id;
  AttrType base_type = AttrType::String;
  std::optional<long long> min_value;  // integer attributes only
  std::optional<long long> max_value;
  std::set<std::string> enum_values;   // string attributes only
};

struct IllFormedModel : std::runtime_error {
  std::vector<std::string> diagnostics;
  explicit IllFormedModel(std::vector<std::string> diags);
};

class Model {
 public:
  // Builds a model from model-level DDL facts. Throws IllFormedModel listing
  // every well-formedness failure found.
  static Model build(const std::vector<Fact>& declarations);

  const std::string& id() const { return model_id_; }
  const std::set<std::string>& classes() const { return classes_; }
  const std::map<std::string, std::string>& parent() const { return parent_; }
  const std::map<std::string, Association>& associations() const {
    return associations_;
  }
  const std::vector<AttributeDecl>& attributes() const { return attributes_; }

  bool has_class(const std::string& c) const { return classes_.count(c) > 0; }
  bool has_association(const std::string& a) const {
    return associations_.count(a) > 0;
  }
  const Association& association(const std::string& a) const;

  // {c} plus all transitive superclasses, child-to-root order.
  std::vector<std::string> ancestors(const std::string& c) const;

  // true iff `ancestor` is c itself or a transitive superclass of c.
  bool is_subclass_of(const std::string& c, const std::string& ancestor) const;

  // Attributes applicable to class c (declared on c or any superclass),
  // ordered by owner depth (most derived first), then attribute id.
  std::vector<AttributeDecl> applicable_attributes(const std::string& c) const;

  // nullptr when no applicable attribute of that id exists for class c.
  const AttributeDecl* find_attribute(const std::string& c,
                                      const std::string& attr_id) const;
  bool has_attribute_anywhere(const std::string& attr_id) const;

  // Classes with no subclasses; only these are eligible for object creation.
  std::vector<std::string> leaf_classes() const;

  std::vector<Fact> to_facts() const;

 private:
  std::string model_id_;
  std::set<std::string> classes_;
  std::map<std::string, std::string> parent_;
  std::map<std::string, Association> associations_;
  std::vector<AttributeDecl> attributes_;
};

}  // namespace ooasp
