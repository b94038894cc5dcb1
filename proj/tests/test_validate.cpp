#include <doctest.h>

#include "helpers.hpp"
#include "ooasp/validate.hpp"

using namespace ooasp;
using test_helpers::load_rules;
using test_helpers::load_session;
using test_helpers::read_fixture;

namespace {
Model fixture_model() {
  return Model::build(parse_facts(read_fixture("model_v1.lp")).facts);
}

Instantiation inst_from(const Model& m, const std::string& text) {
  return Instantiation::build("c", m, parse_facts(text).facts);
}
}  // namespace

TEST_CASE("a lone element misses its mandatory module") {
  auto session = load_session({"model_v1.lp", "inst_c2.lp"});
  Instantiation c2 = session.instantiation("c2");
  auto rules = load_rules("rules_v1.oc");
  const Model& m = session.models.at("v1");

  ValidationReport complete = validate(m, c2, rules, ValidationMode::Complete);
  REQUIRE(complete.violations.size() == 1);
  const Violation& v = *complete.violations.begin();
  CHECK(v.kind == "mincardviolated");
  CHECK(v.args == std::vector<Arg>{Arg{10LL}, Arg{std::string("Element_module")}});
  CHECK(v.side.has_value());
  CHECK(serialize_facts(violations_to_facts(complete)) ==
        "ooasp_cv(\"c2\",mincardviolated(10,\"Element_module\")).\n");

  SUBCASE("partial mode tolerates the incompleteness") {
    CHECK(validate(m, c2, rules, ValidationMode::Partial).valid());
  }
}

TEST_CASE("an empty instantiation is valid") {
  Model m = fixture_model();
  Instantiation empty("c0", "v1");
  CHECK(validate(m, empty, load_rules("rules_v1.oc"), ValidationMode::Complete)
            .valid());
}

TEST_CASE("the fully configured legacy system is valid under version-1 rules") {
  auto session = load_session({"model_v1.lp", "legacy_full.lp"});
  Instantiation c1 = session.instantiation("c1");
  auto report = validate(session.models.at("v1"), c1, load_rules("rules_v1.oc"),
                         ValidationMode::Complete);
  CHECK(report.valid());
}

TEST_CASE("attribute domain violations are reported") {
  Model m = fixture_model();
  auto rules = load_rules("rules_v1.oc");

  SUBCASE("value outside the declared range") {
    Instantiation i = inst_from(m,
                                "ooasp_isa(\"c\",\"ModuleA\",20).\n"
                                "ooasp_attribute_value(\"c\",\"position\",20,7).\n");
    auto report = validate(m, i, rules, ValidationMode::Partial);
    CHECK(report.has("attr_range_violated",
                     {Arg{20LL}, Arg{std::string("position")}, Arg{7LL}}));
  }

  SUBCASE("wrongly typed value") {
    Instantiation i = inst_from(
        m,
        "ooasp_isa(\"c\",\"ModuleA\",20).\n"
        "ooasp_attribute_value(\"c\",\"position\",20,\"high\").\n");
    auto report = validate(m, i, rules, ValidationMode::Partial);
    CHECK(report.has("attr_unknown_value_type",
                     {Arg{20LL}, Arg{std::string("position")},
                      Arg{std::string("high")}}));
  }

  SUBCASE("value for an attribute the class does not have") {
    Instantiation i = inst_from(
        m,
        "ooasp_isa(\"c\",\"Frame\",30).\n"
        "ooasp_attribute_value(\"c\",\"position\",30,1).\n");
    auto report = validate(m, i, rules, ValidationMode::Partial);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations.begin()->kind == "attr_unknown_value_type");
  }

  SUBCASE("missing value only matters in complete mode") {
    Instantiation i = inst_from(m, "ooasp_isa(\"c\",\"ModuleA\",20).");
    CHECK_FALSE(validate(m, i, rules, ValidationMode::Partial)
                    .has("attr_missing",
                         {Arg{20LL}, Arg{std::string("position")}}));
    CHECK(validate(m, i, rules, ValidationMode::Complete)
              .has("attr_missing", {Arg{20LL}, Arg{std::string("position")}}));
  }

  SUBCASE("conflicting duplicate values are always reported") {
    Instantiation i = inst_from(m,
                                "ooasp_isa(\"c\",\"ModuleA\",20).\n"
                                "ooasp_attribute_value(\"c\",\"position\",20,1).\n"
                                "ooasp_attribute_value(\"c\",\"position\",20,2).\n");
    CHECK(validate(m, i, rules, ValidationMode::Partial)
              .has("attr_multiple", {Arg{20LL}, Arg{std::string("position")}}));
  }
}

TEST_CASE("link violations are reported") {
  Model m = fixture_model();
  auto rules = load_rules("rules_v1.oc");

  SUBCASE("too many partners") {
    std::string text = "ooasp_isa(\"c\",\"Frame\",30).\n";
    for (int o = 20; o < 26; ++o) {
      text += "ooasp_isa(\"c\",\"ModuleA\"," + std::to_string(o) + ").\n";
      text += "ooasp_associated(\"c\",\"Frame_modules\",30," +
              std::to_string(o) + ").\n";
    }
    auto report = validate(m, inst_from(m, text), rules, ValidationMode::Partial);
    CHECK(report.has("maxcardviolated",
                     {Arg{30LL}, Arg{std::string("Frame_modules")}}));
  }

  SUBCASE("link endpoint of the wrong class") {
    Instantiation i = inst_from(m,
                                "ooasp_isa(\"c\",\"Frame\",30).\n"
                                "ooasp_isa(\"c\",\"ElementA\",10).\n"
                                "ooasp_associated(\"c\",\"Frame_modules\",30,10).\n");
    auto report = validate(m, i, rules, ValidationMode::Partial);
    CHECK(report.has("assoc_type_violated",
                     {Arg{std::string("Frame_modules")}, Arg{30LL}, Arg{10LL}}));
  }

  SUBCASE("link to a nonexistent object") {
    Instantiation i = inst_from(m,
                                "ooasp_isa(\"c\",\"Frame\",30).\n"
                                "ooasp_associated(\"c\",\"Frame_modules\",30,99).\n");
    auto report = validate(m, i, rules, ValidationMode::Partial);
    CHECK(report.has("dangling_reference", {Arg{99LL}}));
  }
}

TEST_CASE("incomparable classifications are conflicts") {
  Model m = fixture_model();
  Instantiation i = inst_from(m,
                              "ooasp_isa(\"c\",\"ModuleA\",20).\n"
                              "ooasp_isa(\"c\",\"ElementA\",20).\n");
  auto report =
      validate(m, i, load_rules("rules_v1.oc"), ValidationMode::Partial);
  CHECK(report.has("multiple_classification", {Arg{20LL}}));

  SUBCASE("chained classifications collapse to the most specific class") {
    Instantiation j = inst_from(m,
                                "ooasp_isa(\"c\",\"Module\",20).\n"
                                "ooasp_isa(\"c\",\"ModuleA\",20).\n");
    CHECK(*j.class_of(20) == "ModuleA");
    CHECK(validate(m, j, {}, ValidationMode::Partial).valid());
  }
}

TEST_CASE("partial findings are a subset of complete findings") {
  Model m = fixture_model();
  Instantiation i = inst_from(m,
                              "ooasp_isa(\"c\",\"ElementA\",10).\n"
                              "ooasp_isa(\"c\",\"ModuleB\",20).\n"
                              "ooasp_associated(\"c\",\"Element_module\",10,20).\n");
  auto rules = load_rules("rules_v1.oc");
  auto partial = validate(m, i, rules, ValidationMode::Partial);
  auto complete = validate(m, i, rules, ValidationMode::Complete);
  for (const Violation& v : partial.violations)
    CHECK(complete.violations.count(v) == 1);
  CHECK(partial.violations.size() < complete.violations.size());
}

TEST_CASE("json report carries structured fields") {
  auto session = load_session({"model_v1.lp", "inst_c2.lp"});
  auto report = validate(session.models.at("v1"), session.instantiation("c2"),
                         {}, ValidationMode::Complete);
  std::string json = report_to_json(report);
  CHECK(json.find("mincardviolated") != std::string::npos);
  CHECK(json.find("Element_module") != std::string::npos);
  CHECK(json.find("\"side\"") != std::string::npos);
}
