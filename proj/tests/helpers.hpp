#pragma once

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ooasp/constraints.hpp"
#include "ooasp/fact.hpp"
#include "ooasp/instantiation.hpp"

namespace test_helpers {

inline std::string read_fixture(const std::string& name) {
  std::string path = std::string(FIXTURE_DIR) + "/" + name;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline ooasp::Session load_session(std::initializer_list<const char*> names) {
  ooasp::FactFile all;
  for (const char* name : names) {
    ooasp::FactFile f = ooasp::parse_facts(read_fixture(name));
    all.facts.insert(all.facts.end(), f.facts.begin(), f.facts.end());
  }
  return ooasp::Session::load(all);
}

inline std::vector<ooasp::ConstraintRule> load_rules(const std::string& name) {
  return ooasp::parse_constraints(read_fixture(name));
}

}  // namespace test_helpers
