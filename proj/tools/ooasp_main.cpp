#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ooasp/complete.hpp"
#include "ooasp/constraints.hpp"
#include "ooasp/dot.hpp"
#include "ooasp/fact.hpp"
#include "ooasp/instantiation.hpp"
#include "ooasp/model.hpp"
#include "ooasp/reconcile.hpp"
#include "ooasp/validate.hpp"

namespace {

constexpr int kExitViolations = 1;
constexpr int kExitInputError = 2;
constexpr int kExitUnsat = 20;
constexpr int kExitInputInvalid = 21;
constexpr int kExitUsage = 64;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ooasp::SemanticError("cannot read file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ooasp::SemanticError("cannot write file '" + path + "'");
  out << content;
}

ooasp::Session load_session(const std::vector<std::string>& paths) {
  ooasp::FactFile all;
  for (const std::string& p : paths) {
    ooasp::FactFile f = ooasp::parse_facts(read_file(p));
    all.facts.insert(all.facts.end(), f.facts.begin(), f.facts.end());
  }
  return ooasp::Session::load(all);
}

std::vector<ooasp::ConstraintRule> load_rules(const std::string& path) {
  if (path.empty()) return {};
  return ooasp::parse_constraints(read_file(path));
}

const ooasp::Model& pick_model(const ooasp::Session& s,
                               const std::string& wanted) {
  if (!wanted.empty()) {
    auto it = s.models.find(wanted);
    if (it == s.models.end())
      throw ooasp::SemanticError("model '" + wanted + "' not found in input");
    return it->second;
  }
  if (s.models.size() != 1)
    throw ooasp::SemanticError(
        "input defines " + std::to_string(s.models.size()) +
        " models; select one with --model");
  return s.models.begin()->second;
}

std::string pick_instantiation_id(const ooasp::Session& s,
                                  const std::string& wanted) {
  if (!wanted.empty()) return wanted;
  if (s.instantiation_model.size() != 1)
    throw ooasp::SemanticError(
        "input defines " + std::to_string(s.instantiation_model.size()) +
        " instantiations; select one with --inst");
  return s.instantiation_model.begin()->first;
}

ooasp::CompletionConfig make_config(const std::vector<std::string>& max_new,
                                    int solutions,
                                    const std::string& int_domain,
                                    long long id_base, bool id_base_set) {
  ooasp::CompletionConfig cfg;
  cfg.max_solutions = solutions;
  for (const std::string& spec : max_new) {
    auto eq = spec.find('=');
    if (eq == std::string::npos)
      throw ooasp::SemanticError("--max-new expects CLASS=N, got '" + spec + "'");
    cfg.max_new_per_class[spec.substr(0, eq)] = std::stoi(spec.substr(eq + 1));
  }
  if (!int_domain.empty()) {
    auto dots = int_domain.find("..");
    if (dots == std::string::npos)
      throw ooasp::SemanticError("--int-domain expects LO..HI");
    cfg.default_int_domain = {std::stoll(int_domain.substr(0, dots)),
                              std::stoll(int_domain.substr(dots + 2))};
  }
  if (id_base_set) cfg.id_base = id_base;
  return cfg;
}

std::set<long long> object_ids(const ooasp::Instantiation& inst) {
  std::set<long long> out;
  for (const auto& [o, c] : inst.objects()) out.insert(o);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OOASP reasoning tasks over object-model fact files"};
  app.require_subcommand(1);

  // shared options
  std::vector<std::string> model_files;
  std::string inst_file, rules_file, model_id, inst_id;
  std::string mode = "complete";
  std::vector<std::string> max_new;
  int solutions = 1;
  std::string int_domain;
  long long id_base = 0;
  std::string out_prefix;
  std::string json_path, dot_path;
  std::string old_inst_file, new_model_file, costs_file;

  auto add_common = [&](CLI::App* cmd, bool needs_inst) {
    cmd->add_option("-m,--model", model_files, "model fact file (repeatable)");
    if (needs_inst)
      cmd->add_option("-i,--inst-file", inst_file, "instantiation fact file")
          ->required();
    cmd->add_option("-c,--constraints", rules_file,
                    "domain-specific constraint file (.oc)");
    cmd->add_option("--model-id", model_id, "model id when input has several");
    cmd->add_option("--inst", inst_id, "instantiation id when input has several");
  };

  CLI::App* validate_cmd = app.add_subcommand("validate",
                                              "derive all constraint violations");
  add_common(validate_cmd, true);
  validate_cmd->add_option("--mode", mode, "partial|complete")
      ->check(CLI::IsMember({"partial", "complete"}));
  validate_cmd->add_option("--json", json_path, "write JSON report here");

  CLI::App* complete_cmd =
      app.add_subcommand("complete", "extend a partial instantiation");
  add_common(complete_cmd, true);
  complete_cmd->add_option("--max-new", max_new, "CLASS=N creation bound");
  complete_cmd->add_option("--solutions", solutions, "solutions to return");
  complete_cmd->add_option("--int-domain", int_domain,
                           "LO..HI fallback for unbounded integer attributes");
  auto* idb = complete_cmd->add_option("--id-base", id_base,
                                       "first id for created objects");
  complete_cmd->add_option("-o,--out", out_prefix,
                           "output prefix for solution files");

  CLI::App* check_cmd =
      app.add_subcommand("check-model", "check that instantiations exist");
  add_common(check_cmd, false);
  check_cmd->add_option("--max-new", max_new, "CLASS=N creation bound");
  check_cmd->add_option("--int-domain", int_domain,
                        "LO..HI fallback for unbounded integer attributes");

  CLI::App* reconcile_cmd = app.add_subcommand(
      "reconcile", "minimum-cost repair of a legacy instantiation");
  reconcile_cmd->add_option("--old-inst", old_inst_file,
                            "legacy instantiation fact file")
      ->required();
  reconcile_cmd->add_option("--new-model", new_model_file,
                            "target model fact file")
      ->required();
  reconcile_cmd->add_option("-c,--constraints", rules_file,
                            "domain-specific constraint file (.oc)");
  reconcile_cmd->add_option("--costs", costs_file, "cost table file");
  reconcile_cmd->add_option("--max-new", max_new, "CLASS=N creation bound");
  reconcile_cmd->add_option("--int-domain", int_domain,
                            "LO..HI fallback for unbounded integer attributes");
  reconcile_cmd->add_option("--model-id", model_id, "target model id");
  reconcile_cmd->add_option("--inst", inst_id, "legacy instantiation id");
  reconcile_cmd->add_option("-o,--out", out_prefix, "output prefix");

  CLI::App* export_cmd = app.add_subcommand("export", "DOT graph export");
  add_common(export_cmd, true);
  export_cmd->add_option("--dot", dot_path, "output DOT file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*validate_cmd) {
      std::vector<std::string> files = model_files;
      files.push_back(inst_file);
      ooasp::Session s = load_session(files);
      std::string iid = pick_instantiation_id(s, inst_id);
      ooasp::Instantiation inst = s.instantiation(iid);
      auto it = s.models.find(inst.model_id());
      if (it == s.models.end())
        throw ooasp::SemanticError("model '" + inst.model_id() + "' not loaded");
      auto rules = load_rules(rules_file);
      ooasp::ValidationReport report =
          ooasp::validate(it->second, inst, rules,
                          mode == "partial" ? ooasp::ValidationMode::Partial
                                            : ooasp::ValidationMode::Complete);
      std::cout << ooasp::serialize_facts(ooasp::violations_to_facts(report));
      if (!json_path.empty())
        write_file(json_path, ooasp::report_to_json(report) + "\n");
      return report.valid() ? 0 : kExitViolations;
    }

    if (*complete_cmd) {
      std::vector<std::string> files = model_files;
      files.push_back(inst_file);
      ooasp::Session s = load_session(files);
      std::string iid = pick_instantiation_id(s, inst_id);
      ooasp::Instantiation inst = s.instantiation(iid);
      auto it = s.models.find(inst.model_id());
      if (it == s.models.end())
        throw ooasp::SemanticError("model '" + inst.model_id() + "' not loaded");
      auto rules = load_rules(rules_file);
      ooasp::CompletionConfig cfg =
          make_config(max_new, solutions, int_domain, id_base, !idb->empty());
      ooasp::CompletionResult result =
          ooasp::complete(it->second, inst, rules, cfg);
      if (result.outcome == ooasp::CompletionOutcome::InputInvalid) {
        std::cerr << "input instantiation has violations no extension can fix:\n";
        if (result.invalid_report)
          std::cerr << ooasp::serialize_facts(
              ooasp::violations_to_facts(*result.invalid_report));
        return kExitInputInvalid;
      }
      if (result.outcome == ooasp::CompletionOutcome::UnsatWithinBounds) {
        std::cout << "unsatisfiable within the given creation bounds\n";
        return kExitUnsat;
      }
      std::string prefix = out_prefix.empty() ? "solution" : out_prefix;
      std::set<long long> gray = object_ids(inst);
      for (size_t i = 0; i < result.solutions.size(); ++i) {
        const ooasp::Instantiation& sol = result.solutions[i];
        std::string base = prefix + "-" + std::to_string(i + 1);
        write_file(base + ".lp", ooasp::serialize_facts(sol.to_facts()));
        write_file(base + ".dot",
                   ooasp::instantiation_to_dot(it->second, sol, gray));
        std::cout << base << ".lp\n";
      }
      return 0;
    }

    if (*check_cmd) {
      ooasp::Session s = load_session(model_files);
      const ooasp::Model& model = pick_model(s, model_id);
      auto rules = load_rules(rules_file);
      ooasp::CompletionConfig cfg =
          make_config(max_new, 1, int_domain, 0, false);
      ooasp::ConsistencyResult r =
          ooasp::check_model_consistency(model, rules, cfg);
      if (!r.consistent) {
        std::cout << "no witness instantiation within the given bounds\n";
        return kExitUnsat;
      }
      std::cout << "consistent; witness instantiation:\n";
      std::cout << ooasp::serialize_facts(r.witness->to_facts());
      return 0;
    }

    if (*reconcile_cmd) {
      ooasp::Session s = load_session({old_inst_file, new_model_file});
      ooasp::Session target_only =
          load_session({new_model_file});
      const ooasp::Model& target = pick_model(target_only, model_id);
      std::string iid = pick_instantiation_id(s, inst_id);
      ooasp::Instantiation legacy = s.instantiation(iid, &target);
      auto rules = load_rules(rules_file);
      ooasp::CostTable costs;
      if (!costs_file.empty())
        costs = ooasp::CostTable::parse(read_file(costs_file));
      ooasp::CompletionConfig cfg =
          make_config(max_new, 1, int_domain, 0, false);
      ooasp::ReconcileResult r =
          ooasp::reconcile(legacy, target, rules, costs, cfg);
      if (!r.change_set) {
        std::cout << "no valid change set within the given bounds\n";
        return kExitUnsat;
      }
      std::string prefix = out_prefix.empty() ? "reconciled" : out_prefix;
      const ooasp::ChangeSet& cs = *r.change_set;
      std::cout << ooasp::change_set_to_json(cs) << "\n";
      write_file(prefix + ".json", ooasp::change_set_to_json(cs) + "\n");
      write_file(prefix + "-result.lp",
                 ooasp::serialize_facts(cs.result.to_facts()));
      write_file(prefix + "-diff.dot", ooasp::change_set_to_dot(target, cs));
      return 0;
    }

    if (*export_cmd) {
      std::vector<std::string> files = model_files;
      files.push_back(inst_file);
      ooasp::Session s = load_session(files);
      std::string iid = pick_instantiation_id(s, inst_id);
      ooasp::Instantiation inst = s.instantiation(iid);
      auto it = s.models.find(inst.model_id());
      if (it == s.models.end())
        throw ooasp::SemanticError("model '" + inst.model_id() + "' not loaded");
      write_file(dot_path, ooasp::instantiation_to_dot(it->second, inst,
                                                       object_ids(inst)));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return 0;
}
