// Part of the CatEff project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

// Term trees of the free model: leaves e(a, x), operation nodes
// do(op, p, children) and coercion nodes from generalised units. Finite
// models interpret trees; the free extension of an assignment of leaves is
// the unique homomorphism out of the free model.

#ifndef CATEFF_FREEMODEL_HPP
#define CATEFF_FREEMODEL_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cateff/signature.hpp"
#include "cateff/value.hpp"

namespace cateff {

struct TermTree {
  enum class Kind { Leaf, Node, Coerce };

  Kind kind = Kind::Leaf;
  Morphism grade;

  // Leaf.
  Object object;
  SemValue payload;

  // Node. `k` is the common grade of the children.
  std::string op;
  Morphism op_grade;
  TypePtr arity;
  SemValue param;
  Morphism k;
  std::vector<TreePtr> children;

  // Coerce. `child` is never itself a coercion and `r` is never an identity.
  Morphism r;
  TreePtr child;
};

auto leaf(Object a, SemValue x) -> TreePtr;
// Children are indexed by enumerate_type(op.arity) and must share one grade.
auto node(const OpDecl& op, SemValue param, std::vector<TreePtr> children)
    -> TreePtr;
// Normalizing: drops identities and merges nested coercions.
auto coerce(const Morphism& r, TreePtr t) -> TreePtr;

using LeafMap = std::function<TreePtr(const SemValue&)>;

// Replaces every leaf e(b, x) by phi(x). All images must share one grade.
auto graft(const TreePtr& t, const LeafMap& phi) -> TreePtr;

// Structural equality; throws NonComparable on function payloads.
auto tree_equal(const TreePtr& a, const TreePtr& b) -> bool;
auto tree_size(const TreePtr& t) -> std::size_t;
auto tree_depth(const TreePtr& t) -> std::size_t;

auto to_json(const TreePtr& t) -> std::string;
auto to_text(const TreePtr& t) -> std::string;

// A model at object `at`, restricted to finitely many grades. Carriers are
// sets {0, ..., n-1}.
class FiniteModel {
 public:
  using OpInterp =
      std::function<int(const SemValue& param, const std::vector<int>& args)>;
  using CoerceInterp = std::function<int(int)>;

  FiniteModel(const GradedSignature& sig, Object at) : sig_(&sig), at_(at) {}

  auto signature() const -> const GradedSignature& { return *sig_; }
  auto at() const -> Object { return at_; }

  void set_carrier(const Morphism& k, int size);
  // Interpretation of op at continuation grade k : cod(op) -> at, from
  // P x I(k)^arity to I(op;k).
  void set_interp(const std::string& op, const Morphism& k, OpInterp f);
  // Interpretation of a coercion r in front of grade k, I(k) -> I(r;k).
  void set_coercion(const Morphism& r, const Morphism& k, CoerceInterp f);

  auto has_carrier(const Morphism& k) const -> bool;
  // Throws MissingInterp.
  auto carrier(const Morphism& k) const -> int;
  auto interp(const std::string& op, const Morphism& k) const
      -> const OpInterp&;
  auto coercion(const Morphism& r, const Morphism& k) const
      -> const CoerceInterp&;
  auto carrier_grades() const -> std::vector<Morphism>;

  // Endpoints of every declared interpretation (EndpointMismatch,
  // MissingInterp).
  void validate() const;

 private:
  const GradedSignature* sig_;
  Object at_;
  std::map<Morphism, int> carriers_;
  std::map<std::pair<std::string, Morphism>, OpInterp> interp_;
  std::map<std::pair<Morphism, Morphism>, CoerceInterp> coercions_;
};

using Assignment = std::function<int(const SemValue&)>;

// Value of t (grade f : b -> a) at k : a -> model.at(), with leaves read
// from env in I(k). The result lies in I(f;k).
auto interpret_term(const TermTree& t, const FiniteModel& model,
                    const Morphism& k, const Assignment& env) -> int;

// The homomorphism extending phi : X -> I(id_at), defined by recursion on
// trees with leaves at model.at().
auto free_extension(Assignment phi, const FiniteModel& model)
    -> std::function<int(const TreePtr&)>;

struct Equation {
  TreePtr lhs;
  TreePtr rhs;
};

struct EquationViolation {
  std::size_t equation;
  Morphism k;
  std::vector<std::pair<SemValue, int>> env;
  int lhs_value;
  int rhs_value;
};

// Checks each equation at every carrier grade k leaving the leaves' object
// and every assignment of its variables. Grades at which the model lacks a
// needed carrier or interpretation are skipped.
auto check_equations(const std::vector<Equation>& equations,
                     const FiniteModel& model)
    -> std::vector<EquationViolation>;

}  // namespace cateff

#endif  // CATEFF_FREEMODEL_HPP
