// Part of the CatEff project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

// Denotational semantics: primitive types as finite sets, arrows as
// functions into term trees, computations as term trees and handlers as
// folds over trees.

#ifndef CATEFF_DENOTE_HPP
#define CATEFF_DENOTE_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cateff/freemodel.hpp"
#include "cateff/syntax.hpp"

namespace cateff {

struct Domain {
  TypePtr type;
  bool finite = true;
  // Empty for function spaces.
  std::vector<SemValue> elements;

  auto to_string() const -> std::string;
};

auto denote_type(const TypePtr& type) -> Domain;

using Env = std::map<std::string, SemValue>;

auto denote_value(const Env& env, const GradedSignature& sig,
                  const ValuePtr& v) -> SemValue;
// The result has the grade of the computation. Signatures must outlive
// the function values inside the tree.
auto denote_computation(const Env& env, const GradedSignature& sig,
                        const CompPtr& m) -> TreePtr;

// The fold of a tree over h.source into a tree over h.target. `ret`
// replaces the return clause when given. Throws MissingClause.
auto fold_handler(const HandlerDecl& h, const TreePtr& t,
                  const LeafMap* ret = nullptr) -> TreePtr;
auto denote_handler(const HandlerDecl& h)
    -> std::function<TreePtr(const TreePtr&)>;

}  // namespace cateff

#endif  // CATEFF_DENOTE_HPP
