#pragma once

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "ooasp/fact.hpp"
#include "ooasp/model.hpp"

namespace ooasp {

struct SemanticError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Link = std::tuple<std::string, long long, long long>;   // assoc, o1, o2
using ValueFact = std::tuple<std::string, long long, Arg>;    // attr, o, val

// An object model instantiation; immutable after construction.
class Instantiation {
 public:
  Instantiation() = default;
  Instantiation(std::string inst_id, std::string model_id)
      : inst_id_(std::move(inst_id)), model_id_(std::move(model_id)) {}

  // Builds from instance-level facts of one instantiation id. Multiple isa
  // facts for one object collapse to the most specific class when they lie on
  // a single inheritance chain; incomparable classes are recorded as a
  // classification conflict (a validation violation, not a build error).
  // With lenient=true, isa facts naming classes unknown to the model are kept
  // verbatim instead of raising SemanticError (used by reconciliation, which
  // force-deletes them).
  static Instantiation build(const std::string& inst_id, const Model& model,
                             const std::vector<Fact>& facts,
                             bool lenient = false);

  const std::string& id() const { return inst_id_; }
  const std::string& model_id() const { return model_id_; }
  const std::map<long long, std::string>& objects() const { return objects_; }
  const std::set<std::pair<long long, std::string>>& isa() const { return isa_; }
  const std::set<Link>& links() const { return links_; }
  const std::set<ValueFact>& values() const { return values_; }
  const std::set<long long>& classification_conflicts() const {
    return conflicts_;
  }

  bool has_object(long long o) const { return objects_.count(o) > 0; }
  const std::string* class_of(long long o) const {
    auto it = objects_.find(o);
    return it == objects_.end() ? nullptr : &it->second;
  }
  long long max_object_id() const;

  void add_object(long long o, const std::string& cls);
  void add_link(const Link& l) { links_.insert(l); }
  void add_value(const ValueFact& v) { values_.insert(v); }
  void remove_link(const Link& l) { links_.erase(l); }
  void remove_value(const ValueFact& v) { values_.erase(v); }

  // Instance-level content facts: isa, associated, attribute_value.
  std::vector<Fact> content_facts() const;
  // content facts plus the ooasp_instantiation marker.
  std::vector<Fact> to_facts() const;

  friend bool operator==(const Instantiation& a, const Instantiation& b) {
    return a.inst_id_ == b.inst_id_ && a.model_id_ == b.model_id_ &&
           a.isa_ == b.isa_ && a.links_ == b.links_ && a.values_ == b.values_;
  }

 private:
  std::string inst_id_;
  std::string model_id_;
  std::map<long long, std::string> objects_;  // normalized most-specific class
  std::set<std::pair<long long, std::string>> isa_;  // raw isa facts
  std::set<long long> conflicts_;
  std::set<Link> links_;
  std::set<ValueFact> values_;
};

// A parsed fact file split by predicate family. Instance-level facts must
// reference a declared ooasp_instantiation id.
struct Session {
  std::map<std::string, Model> models;                      // by model id
  std::map<std::string, std::string> instantiation_model;   // inst id -> model
  std::map<std::string, std::vector<Fact>> instance_facts;  // by inst id

  static Session load(const FactFile& file);

  // Builds against the instantiation's declared model; a lenient build against
  // `fallback_model` is used when that model is not part of the session.
  Instantiation instantiation(const std::string& inst_id,
                              const Model* fallback_model = nullptr) const;
};

}  // namespace ooasp
