#include "ooasp/dot.hpp"

#include <map>
#include <sstream>

namespace ooasp {

namespace {

std::string object_label(long long o, const std::string& cls,
                         const Instantiation& inst) {
  std::ostringstream label;
  label << o << ": " << cls;
  for (const auto& [at, obj, v] : inst.values())
    if (obj == o) label << "\\n" << at << " = " << arg_to_text(v);
  return label.str();
}

}  // namespace

std::string instantiation_to_dot(const Model& model, const Instantiation& inst,
                                 const std::set<long long>& preexisting) {
  std::ostringstream os;
  os << "digraph instantiation {\n";
  os << "  node [shape=box];\n";
  for (const auto& [o, cls] : inst.objects()) {
    os << "  o" << o << " [label=\"" << object_label(o, cls, inst) << "\"";
    if (preexisting.count(o)) os << ", style=filled, fillcolor=gray";
    os << "];\n";
  }
  for (const auto& [a, o1, o2] : inst.links())
    os << "  o" << o1 << " -> o" << o2 << " [label=\"" << a << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string change_set_to_dot(const Model& model, const ChangeSet& cs) {
  std::ostringstream os;
  os << "digraph changeset {\n";
  os << "  node [shape=box];\n";

  std::set<Fact> created(cs.created.begin(), cs.created.end());
  std::map<long long, std::string> deleted_objects;
  std::set<Link> deleted_links;
  for (const Fact& f : cs.deleted) {
    if (f.predicate == "ooasp_isa")
      deleted_objects[std::get<long long>(f.args[2])] =
          std::get<std::string>(f.args[1]);
    else if (f.predicate == "ooasp_associated")
      deleted_links.insert({std::get<std::string>(f.args[1]),
                            std::get<long long>(f.args[2]),
                            std::get<long long>(f.args[3])});
  }

  const Instantiation& result = cs.result;
  for (const auto& [o, cls] : result.objects()) {
    bool is_new = created.count({"ooasp_isa", {result.id(), cls, o}});
    os << "  o" << o << " [label=\"" << object_label(o, cls, result) << "\"";
    if (is_new)
      os << ", color=green, penwidth=2";
    else
      os << ", style=filled, fillcolor=gray";
    os << "];\n";
  }
  for (const auto& [o, cls] : deleted_objects) {
    if (result.has_object(o)) continue;
    os << "  o" << o << " [label=\"" << o << ": " << cls
       << "\", color=red, style=dashed];\n";
  }
  for (const auto& [a, o1, o2] : result.links()) {
    bool is_new = created.count({"ooasp_associated", {result.id(), a, o1, o2}});
    os << "  o" << o1 << " -> o" << o2 << " [label=\"" << a << "\"";
    if (is_new) os << ", color=green, penwidth=2";
    os << "];\n";
  }
  for (const auto& [a, o1, o2] : deleted_links)
    os << "  o" << o1 << " -> o" << o2 << " [label=\"" << a
       << "\", color=red, style=dashed];\n";
  os << "}\n";
  return os.str();
}

}  // namespace ooasp
