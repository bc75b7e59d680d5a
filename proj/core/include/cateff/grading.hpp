// Part of the CatEff project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

// Finitely presented grading categories, functors between them and the pair
// completion. Morphisms are kept as normal-form generator paths, so equality
// of morphisms is equality of the stored paths.

#ifndef CATEFF_GRADING_HPP
#define CATEFF_GRADING_HPP

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cateff/error.hpp"

namespace cateff {

class GradingCategory;

struct Object {
  const GradingCategory* category = nullptr;
  int id = -1;

  auto name() const -> const std::string&;
  auto valid() const -> bool { return category != nullptr; }

  friend auto operator==(const Object&, const Object&) -> bool = default;
  friend auto operator<=>(const Object&, const Object&) = default;
};

class Morphism {
 public:
  Morphism() = default;

  auto category() const -> const GradingCategory& { return *cat_; }
  auto valid() const -> bool { return cat_ != nullptr; }
  auto dom() const -> Object { return {cat_, dom_}; }
  auto cod() const -> Object { return {cat_, cod_}; }
  auto path() const -> const std::vector<int>& { return path_; }
  auto is_identity() const -> bool { return path_.empty(); }

  // `id_a` or `g;h`.
  auto to_string() const -> std::string;
  // `id[a]` or `g.h`, as accepted by the parser.
  auto to_source() const -> std::string;

  friend auto operator==(const Morphism&, const Morphism&) -> bool = default;
  friend auto operator<=>(const Morphism&, const Morphism&) = default;

 private:
  friend class GradingCategory;

  const GradingCategory* cat_ = nullptr;
  int dom_ = -1;
  int cod_ = -1;
  std::vector<int> path_;
};

struct GeneratorDecl {
  std::string name;
  std::string dom;
  std::string cod;
};

// A path of generator names. An empty list with `identity` set denotes the
// identity at that object; an empty list without it is the identity at an
// object inferred from context (rule right-hand sides, functor images).
struct PathSpec {
  std::vector<std::string> generators;
  std::optional<std::string> identity;
};

struct RuleDecl {
  std::vector<std::string> lhs;
  PathSpec rhs;
};

struct CategoryPresentation {
  std::string name;
  std::vector<std::string> objects;
  std::vector<GeneratorDecl> generators;
  std::vector<RuleDecl> rules;
  std::vector<std::string> wide;
  std::size_t step_cap = 10000;
};

class GradingCategory {
 public:
  struct Generator {
    std::string name;
    int dom;
    int cod;
    bool wide;
  };
  struct Rule {
    std::vector<int> lhs;
    std::vector<int> rhs;
  };

  auto name() const -> const std::string& { return name_; }
  auto presentation() const -> const CategoryPresentation& { return source_; }
  // Name of the category this one is the pair completion of, if any.
  auto completion_of() const -> const std::string& { return completion_of_; }

  auto object_count() const -> int { return static_cast<int>(objects_.size()); }
  auto object(int id) const -> Object { return {this, id}; }
  auto object_name(int id) const -> const std::string& { return objects_[id]; }
  auto find_object(const std::string& name) const -> std::optional<Object>;
  auto object_named(const std::string& name) const -> Object;
  auto objects() const -> std::vector<Object>;

  auto generator_count() const -> int {
    return static_cast<int>(generators_.size());
  }
  auto generator(int id) const -> const Generator& { return generators_[id]; }
  auto find_generator(const std::string& name) const -> std::optional<int>;
  auto rules() const -> const std::vector<Rule>& { return rules_; }

  auto identity(Object a) const -> Morphism;
  auto generator_morphism(int gen) const -> Morphism;
  // Validates composability and returns the normal form.
  auto from_path(const std::vector<int>& gens) const -> Morphism;
  auto from_names(const std::vector<std::string>& names) const -> Morphism;
  auto resolve(const PathSpec& spec) const -> Morphism;

  auto compose(const Morphism& f, const Morphism& g) const -> Morphism;
  auto normalize(std::vector<int> path) const -> std::vector<int>;
  auto in_wide(const Morphism& m) const -> bool;

  // All distinct morphisms a -> b reachable by paths of length <= max_len.
  auto hom(Object a, Object b, std::size_t max_len) const
      -> std::vector<Morphism>;
  // All composable generator paths of length 1..max_len (not normalized).
  auto composable_paths(std::size_t max_len) const
      -> std::vector<std::vector<int>>;

 private:
  friend auto build_category(const CategoryPresentation&)
      -> std::shared_ptr<const GradingCategory>;
  friend auto pair_completion(const GradingCategory&, std::string)
      -> std::shared_ptr<const GradingCategory>;

  auto make(int dom, int cod, std::vector<int> path) const -> Morphism;
  auto path_endpoints(const std::vector<int>& path, std::string_view what) const
      -> std::pair<int, int>;
  void check_termination() const;
  void check_confluence() const;

  std::string name_;
  std::string completion_of_;
  CategoryPresentation source_;
  std::vector<std::string> objects_;
  std::map<std::string, int> object_index_;
  std::vector<Generator> generators_;
  std::map<std::string, int> generator_index_;
  std::vector<Rule> rules_;
  std::vector<std::vector<int>> rules_by_head_;
  std::size_t step_cap_ = 10000;
};

auto build_category(const CategoryPresentation& presentation)
    -> std::shared_ptr<const GradingCategory>;

// Objects unchanged; a fresh generator <a,b> for every ordered pair, with
// f.<b,c> = <a,c>, <a,b>.g = <a,c> and <a,b>.<b,c> = <a,c>. The original
// generators form the wide subcategory. The default name is the source name
// followed by ∇.
auto pair_completion(const GradingCategory& category, std::string name = "")
    -> std::shared_ptr<const GradingCategory>;

auto pair_generator_name(const std::string& a, const std::string& b)
    -> std::string;

struct FunctorPresentation {
  std::string name;
  std::vector<std::pair<std::string, std::string>> objects;
  std::vector<std::pair<std::string, PathSpec>> generators;
};

class GradingFunctor {
 public:
  auto name() const -> const std::string& { return name_; }
  auto source() const -> const GradingCategory& { return *source_; }
  auto target() const -> const GradingCategory& { return *target_; }
  auto source_ptr() const -> const std::shared_ptr<const GradingCategory>& {
    return source_;
  }
  auto target_ptr() const -> const std::shared_ptr<const GradingCategory>& {
    return target_;
  }

  auto apply(Object a) const -> Object;
  auto apply(const Morphism& m) const -> Morphism;
  auto generator_image(int gen) const -> const Morphism& {
    return images_[gen];
  }

 private:
  friend auto build_functor(const FunctorPresentation&,
                            std::shared_ptr<const GradingCategory>,
                            std::shared_ptr<const GradingCategory>)
      -> std::shared_ptr<const GradingFunctor>;

  std::string name_;
  std::shared_ptr<const GradingCategory> source_;
  std::shared_ptr<const GradingCategory> target_;
  std::vector<int> object_map_;
  std::vector<Morphism> images_;
};

auto build_functor(const FunctorPresentation& presentation,
                   std::shared_ptr<const GradingCategory> source,
                   std::shared_ptr<const GradingCategory> target)
    -> std::shared_ptr<const GradingFunctor>;

auto identity_functor(std::shared_ptr<const GradingCategory> category)
    -> std::shared_ptr<const GradingFunctor>;

// Sends everything to the identity of the single object of `target`.
auto collapse_functor(std::shared_ptr<const GradingCategory> source,
                      std::shared_ptr<const GradingCategory> target)
    -> std::shared_ptr<const GradingFunctor>;

}  // namespace cateff

#endif  // CATEFF_GRADING_HPP
