// Part of the CatEff project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

// Semantic values: elements of the interpretation of a type. Function values
// map an argument to a term tree.

#ifndef CATEFF_VALUE_HPP
#define CATEFF_VALUE_HPP

#include <compare>
#include <functional>
#include <memory>
#include <string>

namespace cateff {

struct TermTree;
using TreePtr = std::shared_ptr<const TermTree>;

class SemValue {
 public:
  enum class Kind { Star, Pair, Inl, Inr, Fun };
  using Fn = std::function<TreePtr(const SemValue&)>;

  SemValue() = default;

  static auto star() -> SemValue;
  static auto pair(SemValue a, SemValue b) -> SemValue;
  static auto inl(SemValue a) -> SemValue;
  static auto inr(SemValue a) -> SemValue;
  static auto fun(Fn fn) -> SemValue;

  auto kind() const -> Kind { return kind_; }
  auto first() const -> const SemValue& { return *a_; }
  auto second() const -> const SemValue& { return *b_; }
  // Payload of inl / inr.
  auto payload() const -> const SemValue& { return *a_; }
  auto apply(const SemValue& arg) const -> TreePtr;

  // False when a function value occurs anywhere inside.
  auto is_comparable() const -> bool;
  auto to_string() const -> std::string;

  // Both throw NonComparable on function values.
  friend auto operator==(const SemValue& a, const SemValue& b) -> bool;
  friend auto operator<=>(const SemValue& a, const SemValue& b)
      -> std::strong_ordering;

 private:
  Kind kind_ = Kind::Star;
  std::shared_ptr<const SemValue> a_;
  std::shared_ptr<const SemValue> b_;
  std::shared_ptr<const Fn> fn_;
};

}  // namespace cateff

#endif  // CATEFF_VALUE_HPP
