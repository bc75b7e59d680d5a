// Part of the CatEff project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

// Fine-grain call-by-value terms with graded lambdas, operation calls,
// handlers and coercions. Terms are immutable and share subterms.

#ifndef CATEFF_SYNTAX_HPP
#define CATEFF_SYNTAX_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cateff/grading.hpp"
#include "cateff/signature.hpp"
#include "cateff/types.hpp"

namespace cateff {

struct ValueNode;
struct CompNode;
struct HandlerDecl;
using ValuePtr = std::shared_ptr<const ValueNode>;
using CompPtr = std::shared_ptr<const CompNode>;
using HandlerPtr = std::shared_ptr<const HandlerDecl>;

namespace ast {

struct Var {
  std::string name;
};
struct Star {};
struct Inl {
  ValuePtr value;
  TypePtr type;
};
struct Inr {
  ValuePtr value;
  TypePtr type;
};
struct Pair {
  ValuePtr first;
  ValuePtr second;
};
struct Lam {
  Morphism grade;
  std::string var;
  TypePtr var_type;
  CompPtr body;
};

struct Val {
  Object object;
  ValuePtr value;
};
struct Let {
  std::string var;
  CompPtr bound;
  CompPtr body;
};
struct App {
  ValuePtr fn;
  ValuePtr arg;
};
struct OpCall {
  std::string op;
  ValuePtr arg;
};
struct Split {
  ValuePtr value;
  std::string first;
  std::string second;
  CompPtr body;
};
struct Case {
  ValuePtr value;
  std::string left_var;
  CompPtr left;
  std::string right_var;
  CompPtr right;
};
struct Handle {
  CompPtr body;
  HandlerPtr handler;
};
struct Weaken {
  Morphism pre;
  CompPtr body;
  Morphism post;
};

}  // namespace ast

struct ValueNode {
  std::variant<ast::Var, ast::Star, ast::Inl, ast::Inr, ast::Pair, ast::Lam>
      node;
};

struct CompNode {
  std::variant<ast::Val, ast::Let, ast::App, ast::OpCall, ast::Split,
               ast::Case, ast::Handle, ast::Weaken>
      node;
};

// Constructors.
auto var(std::string name) -> ValuePtr;
auto star() -> ValuePtr;
auto inl(ValuePtr v, TypePtr sum_type) -> ValuePtr;
auto inr(ValuePtr v, TypePtr sum_type) -> ValuePtr;
auto pair(ValuePtr a, ValuePtr b) -> ValuePtr;
auto lam(Morphism grade, std::string x, TypePtr type, CompPtr body)
    -> ValuePtr;
auto val(Object a, ValuePtr v) -> CompPtr;
auto let(std::string x, CompPtr bound, CompPtr body) -> CompPtr;
auto app(ValuePtr fn, ValuePtr arg) -> CompPtr;
auto op_call(std::string op, ValuePtr arg) -> CompPtr;
auto split(ValuePtr v, std::string x, std::string y, CompPtr body) -> CompPtr;
auto case_of(ValuePtr v, std::string x, CompPtr left, std::string y,
             CompPtr right) -> CompPtr;
auto handle(CompPtr body, HandlerPtr handler) -> CompPtr;
auto weaken(Morphism pre, CompPtr body, Morphism post) -> CompPtr;

template <typename T>
auto as(const CompPtr& c) -> const T* {
  return std::get_if<T>(&c->node);
}
template <typename T>
auto as(const ValuePtr& v) -> const T* {
  return std::get_if<T>(&v->node);
}

struct Clause {
  std::string op;
  // Absent for a default clause, which applies at every continuation grade.
  std::optional<Morphism> k;
  std::string param;
  std::string resume;
  CompPtr body;
};

struct HandlerDecl {
  std::string name;
  std::shared_ptr<const GradedSignature> source;
  std::shared_ptr<const GradedSignature> target;
  std::shared_ptr<const GradingFunctor> functor;
  Object at;
  TypePtr handled;
  TypePtr result;
  std::string return_var;
  CompPtr return_body;
  std::vector<Clause> clauses;

  // The clause with an explicit grade equal to k, else the default clause.
  auto find_clause(const std::string& op, const Morphism& k) const
      -> const Clause*;
  auto has_default(const std::string& op) const -> bool;
};

struct Program {
  std::string name;
  std::shared_ptr<const GradedSignature> signature;
  TypePtr type;
  Morphism grade;
  CompPtr body;
};

// A parsed .ceff file. Declarations are kept in source order.
struct Theory {
  std::vector<std::shared_ptr<const GradingCategory>> categories;
  std::vector<std::shared_ptr<const GradingFunctor>> functors;
  std::vector<std::shared_ptr<const GradedSignature>> signatures;
  std::vector<HandlerPtr> handlers;
  std::vector<Program> programs;
  std::vector<std::pair<std::string, TypePtr>> type_aliases;

  auto category(const std::string& name) const
      -> std::shared_ptr<const GradingCategory>;
  auto functor(const std::string& name) const
      -> std::shared_ptr<const GradingFunctor>;
  auto signature(const std::string& name) const
      -> std::shared_ptr<const GradedSignature>;
  auto handler(const std::string& name) const -> HandlerPtr;
  auto program(const std::string& name) const -> const Program*;
};

// Throws Error(SyntaxError | UnboundName | grading and signature errors).
auto parse_theory(std::string_view source,
                  std::string_view filename = "<input>") -> Theory;
auto parse_file(const std::string& path) -> Theory;

auto to_source(const ValuePtr& v) -> std::string;
auto to_source(const CompPtr& c) -> std::string;
auto to_source(const HandlerDecl& h) -> std::string;
auto to_source(const Program& p) -> std::string;
auto to_source(const Theory& t) -> std::string;

// Structural equality; handlers compare by identity.
auto equal(const ValuePtr& a, const ValuePtr& b) -> bool;
auto equal(const CompPtr& a, const CompPtr& b) -> bool;

auto free_vars(const ValuePtr& v) -> std::set<std::string>;
auto free_vars(const CompPtr& c) -> std::set<std::string>;
auto contains_weaken(const CompPtr& c) -> bool;
auto size(const CompPtr& c) -> std::size_t;

using Bindings = std::map<std::string, ValuePtr>;

// Capture-avoiding simultaneous substitution. Bound variables that would
// capture a free variable of the substituted values are renamed with
// fresh_name.
auto substitute(const ValuePtr& v, const Bindings& b) -> ValuePtr;
auto substitute(const CompPtr& c, const Bindings& b) -> CompPtr;

// `base'N` from a process-wide counter.
auto fresh_name(std::string_view base) -> std::string;

}  // namespace cateff

#endif  // CATEFF_SYNTAX_HPP
