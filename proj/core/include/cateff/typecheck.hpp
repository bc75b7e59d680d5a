// Part of the CatEff project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#ifndef CATEFF_TYPECHECK_HPP
#define CATEFF_TYPECHECK_HPP

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cateff/syntax.hpp"

namespace cateff {

// Ordered typing context. Extending with a name already present shadows it.
class Context {
 public:
  Context() = default;

  auto lookup(const std::string& name) const -> const TypePtr*;
  auto extend(const std::string& name, TypePtr type) const -> Context;
  auto entries() const -> const std::vector<std::pair<std::string, TypePtr>>& {
    return entries_;
  }
  auto restrict_to(const std::set<std::string>& names) const -> Context;

 private:
  std::vector<std::pair<std::string, TypePtr>> entries_;
};

struct Judgement {
  TypePtr type;
  Morphism grade;
};

struct HandlerProfile {
  TypePtr handled;
  TypePtr result;
  const GradingFunctor* functor;
  Object at;
};

// An operation occurrence together with the grade of the rest of the
// enclosing computation after it returns.
struct OpSite {
  std::string op;
  Morphism continuation;
};

// Checks values, computations, handlers and handle sites. Results about
// handlers are cached, so one checker should be reused; it is not safe to
// share one instance between threads.
class TypeChecker {
 public:
  auto type_of_value(const Context& ctx, const GradedSignature& sig,
                     const ValuePtr& v) -> TypePtr;
  auto grade_of_computation(const Context& ctx, const GradedSignature& sig,
                            const CompPtr& m) -> Judgement;
  auto check_handler(const HandlerDecl& h) -> HandlerProfile;
  auto check_handle_site(const Context& ctx, const GradedSignature& sig,
                         const ast::Handle& site) -> Judgement;
  // Checks the body against the declared type and grade.
  auto check_program(const Program& p) -> Judgement;

  // Operation occurrences of m whose continuation is statically known.
  auto op_sites(const Context& ctx, const GradedSignature& sig,
                const CompPtr& m) -> std::vector<OpSite>;

 private:
  auto infer(const Context& ctx, const GradedSignature& sig, const CompPtr& m,
             std::vector<OpSite>* sites) -> Judgement;
  auto handle_site(const Context& ctx, const GradedSignature& sig,
                   const ast::Handle& site, std::vector<OpSite>* sites)
      -> Judgement;
  // Checks a clause body at continuation grade k and returns its op sites.
  auto check_clause(const HandlerDecl& h, const Clause& c, const Morphism& k)
      -> const std::vector<OpSite>&;
  auto return_sites(const HandlerDecl& h) -> const std::vector<OpSite>&;

  std::map<const HandlerDecl*, HandlerProfile> profiles_;
  std::map<const HandlerDecl*, std::vector<OpSite>> return_sites_;
  std::map<std::tuple<const HandlerDecl*, const Clause*, Morphism>,
           std::vector<OpSite>>
      clause_sites_;
};

}  // namespace cateff

#endif  // CATEFF_TYPECHECK_HPP
