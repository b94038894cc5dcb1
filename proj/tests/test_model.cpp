#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "ooasp/model.hpp"

using namespace ooasp;
using test_helpers::read_fixture;

namespace {
Model fixture_model() {
  return Model::build(parse_facts(read_fixture("model_v1.lp")).facts);
}

std::vector<std::string> diagnostics_of(const std::string& text) {
  try {
    Model::build(parse_facts(text).facts);
  } catch (const IllFormedModel& e) {
    return e.diagnostics;
  }
  return {};
}

bool any_contains(const std::vector<std::string>& diags,
                  const std::string& needle) {
  return std::any_of(diags.begin(), diags.end(), [&](const std::string& d) {
    return d.find(needle) != std::string::npos;
  });
}
}  // namespace

TEST_CASE("fixture model exposes classes, hierarchy, and associations") {
  Model m = fixture_model();
  CHECK(m.id() == "v1");
  CHECK(m.classes().size() == 8);
  CHECK(m.ancestors("ModuleA") ==
        std::vector<std::string>{"ModuleA", "Module", "HwObject"});
  CHECK(m.ancestors("HwObject") == std::vector<std::string>{"HwObject"});
  CHECK(m.is_subclass_of("ElementB", "Element"));
  CHECK(m.is_subclass_of("ElementB", "ElementB"));
  CHECK_FALSE(m.is_subclass_of("Element", "ElementB"));
  CHECK_FALSE(m.is_subclass_of("ModuleA", "Element"));

  const Association& fm = m.association("Frame_modules");
  CHECK(fm.class1 == "Frame");
  CHECK(fm.min1 == 1);
  CHECK(fm.max1 == 1);
  CHECK(fm.class2 == "Module");
  CHECK(fm.min2 == 0);
  CHECK(fm.max2 == 5);

  CHECK(m.leaf_classes() ==
        std::vector<std::string>{"ElementA", "ElementB", "Frame", "ModuleA",
                                 "ModuleB"});
}

TEST_CASE("attributes are inherited along the class chain") {
  Model m = fixture_model();
  auto attrs = m.applicable_attributes("ModuleB");
  REQUIRE(attrs.size() == 1);
  CHECK(attrs[0].attr_id == "position");
  CHECK(attrs[0].owner_class == "Module");
  CHECK(attrs[0].base_type == AttrType::Integer);
  CHECK(attrs[0].min_value == 1);
  CHECK(attrs[0].max_value == 5);

  CHECK(m.find_attribute("ModuleA", "position") != nullptr);
  CHECK(m.find_attribute("Frame", "position") == nullptr);
  CHECK(m.has_attribute_anywhere("position"));
  CHECK_FALSE(m.has_attribute_anywhere("weight"));
}

TEST_CASE("model round-trips through its fact form") {
  Model m = fixture_model();
  Model again = Model::build(m.to_facts());
  CHECK(serialize_facts(again.to_facts()) == serialize_facts(m.to_facts()));
}

TEST_CASE("ill-formed models report every problem at once") {
  auto diags = diagnostics_of(
      "ooasp_class(\"m\",\"A\").\n"
      "ooasp_class(\"m\",\"A\").\n"
      "ooasp_subclass(\"m\",\"A\",\"Ghost\").\n"
      "ooasp_assoc(\"m\",\"r\",\"A\",2,1,\"A\",0,1).\n"
      "ooasp_attribute(\"m\",\"A\",\"size\",\"integer\").\n"
      "ooasp_attribute_enum(\"m\",\"A\",\"size\",\"big\").\n");
  CHECK(any_contains(diags, "duplicate"));
  CHECK(any_contains(diags, "Ghost"));
  CHECK(any_contains(diags, "r"));
  CHECK(any_contains(diags, "size"));
  CHECK(diags.size() >= 4);
}

TEST_CASE("subclass cycles are detected") {
  auto diags = diagnostics_of(
      "ooasp_class(\"m\",\"A\").\n"
      "ooasp_class(\"m\",\"B\").\n"
      "ooasp_subclass(\"m\",\"A\",\"B\").\n"
      "ooasp_subclass(\"m\",\"B\",\"A\").\n");
  CHECK(any_contains(diags, "cycle"));
}

TEST_CASE("mixed model identifiers are rejected") {
  auto diags = diagnostics_of(
      "ooasp_class(\"m\",\"A\").\n"
      "ooasp_class(\"other\",\"B\").\n");
  CHECK_FALSE(diags.empty());
}

TEST_CASE("multiple superclasses are rejected") {
  auto diags = diagnostics_of(
      "ooasp_class(\"m\",\"A\").\n"
      "ooasp_class(\"m\",\"B\").\n"
      "ooasp_class(\"m\",\"C\").\n"
      "ooasp_subclass(\"m\",\"C\",\"A\").\n"
      "ooasp_subclass(\"m\",\"C\",\"B\").\n");
  CHECK(any_contains(diags, "C"));
}

TEST_CASE("attribute refinements require a declaration") {
  auto diags = diagnostics_of(
      "ooasp_class(\"m\",\"A\").\n"
      "ooasp_attribute_minInclusive(\"m\",\"A\",\"size\",1).\n");
  CHECK(any_contains(diags, "size"));
}
