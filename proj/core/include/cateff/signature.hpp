// Part of the CatEff project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#ifndef CATEFF_SIGNATURE_HPP
#define CATEFF_SIGNATURE_HPP

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cateff/grading.hpp"
#include "cateff/types.hpp"
#include "cateff/value.hpp"

namespace cateff {

// op : P ~> Q @ grade
struct OpDecl {
  std::string name;
  TypePtr param;
  TypePtr arity;
  Morphism grade;
};

class GradedSignature {
 public:
  auto name() const -> const std::string& { return name_; }
  auto category() const -> const GradingCategory& { return *category_; }
  auto category_ptr() const -> const std::shared_ptr<const GradingCategory>& {
    return category_;
  }
  auto ops() const -> const std::vector<OpDecl>& { return ops_; }
  auto find(const std::string& op) const -> const OpDecl*;
  // Throws UnboundName.
  auto op(const std::string& op) const -> const OpDecl&;

 private:
  friend auto build_signature(std::string,
                              std::shared_ptr<const GradingCategory>,
                              std::vector<OpDecl>)
      -> std::shared_ptr<const GradedSignature>;

  std::string name_;
  std::shared_ptr<const GradingCategory> category_;
  std::vector<OpDecl> ops_;
  std::map<std::string, std::size_t> index_;
};

auto build_signature(std::string name,
                     std::shared_ptr<const GradingCategory> category,
                     std::vector<OpDecl> ops)
    -> std::shared_ptr<const GradedSignature>;

// Canonical elements of a primitive type in a fixed order: 1 = {()},
// A * B lexicographic, A + B all inl before all inr.
auto enumerate_type(const Type& type) -> std::vector<SemValue>;
auto type_size(const Type& type) -> std::size_t;
// Position of `value` in enumerate_type(type).
auto index_of(const Type& type, const SemValue& value) -> std::size_t;

}  // namespace cateff

#endif  // CATEFF_SIGNATURE_HPP
