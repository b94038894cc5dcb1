#pragma once

#include <set>
#include <string>

#include "ooasp/instantiation.hpp"
#include "ooasp/model.hpp"
#include "ooasp/reconcile.hpp"

namespace ooasp {

// Object graph in DOT form; objects listed in `preexisting` are filled gray.
std::string instantiation_to_dot(const Model& model, const Instantiation& inst,
                                 const std::set<long long>& preexisting);

// Change-set diff graph: deleted facts dashed red, created facts bold green.
std::string change_set_to_dot(const Model& model, const ChangeSet& cs);

}  // namespace ooasp
