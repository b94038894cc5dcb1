#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>

#include "ooasp/complete.hpp"
#include "ooasp/reconcile.hpp"

namespace ooasp {

// Brute-force reference semantics: exhaustive enumeration of every
// existence/link/value assignment, filtered by complete-mode validation.
// Stands in for stable-model enumeration of the generative encoding: the
// generated programs are stratified plus choice rules, so their stable
// models are exactly the constraint-satisfying assignments enumerated here.

struct OracleCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Canonicalized solution keys (serialized fact sets with new objects renamed
// into the canonical sequence). No pruning, no symmetry assumptions beyond
// canonicalization.
std::set<std::string> enumerate_completions_bruteforce(
    const Model& model, const Instantiation& inst,
    const std::vector<ConstraintRule>& rules, const CompletionConfig& config,
    int cap = 16);

// Minimum change-set cost over all 2^n reuse/delete assignments composed with
// all brute-force completions; nullopt when no valid change set exists within
// bounds.
std::optional<long long> min_repair_cost_bruteforce(
    const Instantiation& legacy, const Model& target_model,
    const std::vector<ConstraintRule>& rules, const CostTable& costs,
    const CompletionConfig& config, int cap = 16);

}  // namespace ooasp
