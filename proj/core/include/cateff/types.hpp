// Part of the CatEff project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#ifndef CATEFF_TYPES_HPP
#define CATEFF_TYPES_HPP

#include <memory>
#include <string>

#include "cateff/grading.hpp"

namespace cateff {

class Type;
using TypePtr = std::shared_ptr<const Type>;

// 1, A * B, A + B and graded arrows A -> B @ f. Types without arrows are
// primitive.
class Type {
 public:
  enum class Kind { Unit, Prod, Sum, Arrow };

  static auto unit() -> TypePtr;
  static auto prod(TypePtr a, TypePtr b) -> TypePtr;
  static auto sum(TypePtr a, TypePtr b) -> TypePtr;
  static auto arrow(TypePtr a, TypePtr b, Morphism grade) -> TypePtr;

  auto kind() const -> Kind { return kind_; }
  auto left() const -> const TypePtr& { return left_; }
  auto right() const -> const TypePtr& { return right_; }
  auto grade() const -> const Morphism& { return grade_; }
  auto is_primitive() const -> bool;

  // Display form: grades as g;h.
  auto to_string() const -> std::string;
  // Concrete syntax: grades as g.h.
  auto to_source() const -> std::string;

  Type(Kind kind, TypePtr left, TypePtr right, Morphism grade)
      : kind_(kind),
        left_(std::move(left)),
        right_(std::move(right)),
        grade_(std::move(grade)) {}

 private:
  Kind kind_;
  TypePtr left_;
  TypePtr right_;
  Morphism grade_;
};

auto operator==(const Type& a, const Type& b) -> bool;
auto type_equal(const TypePtr& a, const TypePtr& b) -> bool;

}  // namespace cateff

#endif  // CATEFF_TYPES_HPP
