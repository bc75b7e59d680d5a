// Part of the CatEff project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "cateff/grading.hpp"

#include <algorithm>
#include <set>

namespace cateff {

namespace {

auto join(const std::vector<int>& path, const GradingCategory& cat,
          std::string_view sep, bool source) -> std::string {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i > 0) out += sep;
    const std::string& name = cat.generator(path[i]).name;
    if (source && name.rfind("⟨", 0) == 0) {
      // ⟨a,b⟩ is written <a,b> in source text.
      std::string inner = name.substr(std::string("⟨").size());
      inner.resize(inner.size() - std::string("⟩").size());
      out += "<" + inner + ">";
    } else {
      out += name;
    }
  }
  return out;
}

auto names_of(const std::vector<int>& path, const GradingCategory& cat)
    -> std::string {
  if (path.empty()) return "(empty path)";
  return join(path, cat, ".", false);
}

}  // namespace

auto Object::name() const -> const std::string& {
  return category->object_name(id);
}

auto Morphism::to_string() const -> std::string {
  if (cat_ == nullptr) return "<invalid>";
  if (path_.empty()) return "id_" + cat_->object_name(dom_);
  return join(path_, *cat_, ";", false);
}

auto Morphism::to_source() const -> std::string {
  if (cat_ == nullptr) return "<invalid>";
  if (path_.empty()) return "id[" + cat_->object_name(dom_) + "]";
  return join(path_, *cat_, ".", true);
}

auto GradingCategory::find_object(const std::string& name) const
    -> std::optional<Object> {
  auto it = object_index_.find(name);
  if (it == object_index_.end()) return std::nullopt;
  return Object{this, it->second};
}

auto GradingCategory::object_named(const std::string& name) const -> Object {
  auto obj = find_object(name);
  if (!obj) {
    fail(ErrorKind::UnknownObject,
         "unknown object '" + name + "' in category " + name_);
  }
  return *obj;
}

auto GradingCategory::objects() const -> std::vector<Object> {
  std::vector<Object> out;
  for (int i = 0; i < object_count(); ++i) out.push_back(object(i));
  return out;
}

auto GradingCategory::find_generator(const std::string& name) const
    -> std::optional<int> {
  auto it = generator_index_.find(name);
  if (it == generator_index_.end()) return std::nullopt;
  return it->second;
}

auto GradingCategory::make(int dom, int cod, std::vector<int> path) const
    -> Morphism {
  Morphism m;
  m.cat_ = this;
  m.dom_ = dom;
  m.cod_ = cod;
  m.path_ = std::move(path);
  return m;
}

auto GradingCategory::identity(Object a) const -> Morphism {
  if (a.category != this) {
    fail(ErrorKind::UnknownObject, "object from another category");
  }
  return make(a.id, a.id, {});
}

auto GradingCategory::generator_morphism(int gen) const -> Morphism {
  return from_path({gen});
}

auto GradingCategory::path_endpoints(const std::vector<int>& path,
                                     std::string_view what) const
    -> std::pair<int, int> {
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (generators_[path[i - 1]].cod != generators_[path[i]].dom) {
      fail(ErrorKind::NotComposable,
           std::string(what) + ": " + generators_[path[i - 1]].name +
               " and " + generators_[path[i]].name + " do not compose in " +
               name_);
    }
  }
  return {generators_[path.front()].dom, generators_[path.back()].cod};
}

auto GradingCategory::from_path(const std::vector<int>& gens) const
    -> Morphism {
  if (gens.empty()) {
    fail(ErrorKind::NotComposable, "empty path has no endpoints");
  }
  auto [dom, cod] = path_endpoints(gens, "path");
  return make(dom, cod, normalize(gens));
}

auto GradingCategory::from_names(const std::vector<std::string>& names) const
    -> Morphism {
  std::vector<int> gens;
  for (const auto& n : names) {
    auto g = find_generator(n);
    if (!g) {
      fail(ErrorKind::UnknownGenerator,
           "unknown generator '" + n + "' in category " + name_);
    }
    gens.push_back(*g);
  }
  return from_path(gens);
}

auto GradingCategory::resolve(const PathSpec& spec) const -> Morphism {
  if (spec.generators.empty()) {
    if (!spec.identity) {
      fail(ErrorKind::UnknownObject, "identity without an object");
    }
    return identity(object_named(*spec.identity));
  }
  return from_names(spec.generators);
}

auto GradingCategory::compose(const Morphism& f, const Morphism& g) const
    -> Morphism {
  if (f.cat_ != this || g.cat_ != this) {
    fail(ErrorKind::NotComposable, "morphism from another category");
  }
  if (f.cod_ != g.dom_) {
    fail(ErrorKind::NotComposable, "cannot compose " + f.to_string() +
                                       " with " + g.to_string());
  }
  std::vector<int> path = f.path_;
  path.insert(path.end(), g.path_.begin(), g.path_.end());
  return make(f.dom_, g.cod_, normalize(std::move(path)));
}

auto GradingCategory::normalize(std::vector<int> path) const
    -> std::vector<int> {
  if (rules_.empty()) return path;
  std::size_t steps = 0;
  while (true) {
    bool rewritten = false;
    for (std::size_t pos = 0; pos < path.size() && !rewritten; ++pos) {
      for (int r : rules_by_head_[path[pos]]) {
        const Rule& rule = rules_[r];
        if (pos + rule.lhs.size() > path.size()) continue;
        if (!std::equal(rule.lhs.begin(), rule.lhs.end(),
                        path.begin() + static_cast<long>(pos))) {
          continue;
        }
        std::vector<int> next(path.begin(),
                              path.begin() + static_cast<long>(pos));
        next.insert(next.end(), rule.rhs.begin(), rule.rhs.end());
        next.insert(next.end(),
                    path.begin() + static_cast<long>(pos + rule.lhs.size()),
                    path.end());
        path = std::move(next);
        rewritten = true;
        break;
      }
    }
    if (!rewritten) return path;
    if (++steps > step_cap_) {
      fail(ErrorKind::NonTerminatingRules,
           "rewriting in " + name_ + " exceeded " +
               std::to_string(step_cap_) + " steps");
    }
  }
}

auto GradingCategory::in_wide(const Morphism& m) const -> bool {
  return std::all_of(m.path_.begin(), m.path_.end(),
                     [&](int g) { return generators_[g].wide; });
}

auto GradingCategory::hom(Object a, Object b, std::size_t max_len) const
    -> std::vector<Morphism> {
  std::set<std::vector<int>> found;
  if (a == b) found.insert(std::vector<int>{});
  std::vector<std::vector<int>> frontier = {{}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& p : frontier) {
      int at = p.empty() ? a.id : generators_[p.back()].cod;
      for (int g = 0; g < generator_count(); ++g) {
        if (generators_[g].dom != at) continue;
        auto q = p;
        q.push_back(g);
        if (generators_[g].cod == b.id) found.insert(normalize(q));
        next.push_back(std::move(q));
      }
    }
    frontier = std::move(next);
  }
  std::vector<Morphism> out;
  for (const auto& p : found) {
    // Normal forms of a -> b paths are a -> b paths.
    out.push_back(make(a.id, b.id, p));
  }
  return out;
}

auto GradingCategory::composable_paths(std::size_t max_len) const
    -> std::vector<std::vector<int>> {
  std::vector<std::vector<int>> out;
  std::vector<std::vector<int>> frontier;
  for (int g = 0; g < generator_count(); ++g) frontier.push_back({g});
  for (std::size_t len = 1; len <= max_len && !frontier.empty(); ++len) {
    out.insert(out.end(), frontier.begin(), frontier.end());
    if (len == max_len) break;
    std::vector<std::vector<int>> next;
    for (const auto& p : frontier) {
      for (int g = 0; g < generator_count(); ++g) {
        if (generators_[g].dom != generators_[p.back()].cod) continue;
        auto q = p;
        q.push_back(g);
        next.push_back(std::move(q));
      }
    }
    frontier = std::move(next);
  }
  return out;
}

void GradingCategory::check_termination() const {
  if (rules_.empty()) return;
  for (const auto& p : composable_paths(3)) normalize(p);
}

void GradingCategory::check_confluence() const {
  auto report = [&](const std::vector<int>& word, const std::vector<int>& x,
                    const std::vector<int>& y) {
    fail(ErrorKind::NonConfluentRules,
         "rules of " + name_ + " are not confluent: " + names_of(word, *this) +
             " rewrites to both " + names_of(x, *this) + " and " +
             names_of(y, *this));
  };
  auto joinable = [&](const std::vector<int>& word, std::vector<int> x,
                      std::vector<int> y) {
    auto nx = normalize(std::move(x));
    auto ny = normalize(std::move(y));
    if (nx != ny) report(word, nx, ny);
  };
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const auto& li = rules_[i].lhs;
    for (std::size_t j = 0; j < rules_.size(); ++j) {
      const auto& lj = rules_[j].lhs;
      // Proper overlaps: a suffix of li is a prefix of lj.
      for (std::size_t o = 1; o < li.size() && o < lj.size(); ++o) {
        if (!std::equal(li.end() - static_cast<long>(o), li.end(),
                        lj.begin())) {
          continue;
        }
        std::vector<int> word = li;
        word.insert(word.end(), lj.begin() + static_cast<long>(o), lj.end());
        std::vector<int> x = rules_[i].rhs;
        x.insert(x.end(), lj.begin() + static_cast<long>(o), lj.end());
        std::vector<int> y(li.begin(), li.end() - static_cast<long>(o));
        y.insert(y.end(), rules_[j].rhs.begin(), rules_[j].rhs.end());
        joinable(word, x, y);
      }
      // Inclusions: lj occurs inside li.
      if (i == j || lj.size() > li.size()) continue;
      for (std::size_t p = 0; p + lj.size() <= li.size(); ++p) {
        if (!std::equal(lj.begin(), lj.end(),
                        li.begin() + static_cast<long>(p))) {
          continue;
        }
        std::vector<int> y(li.begin(), li.begin() + static_cast<long>(p));
        y.insert(y.end(), rules_[j].rhs.begin(), rules_[j].rhs.end());
        y.insert(y.end(), li.begin() + static_cast<long>(p + lj.size()),
                 li.end());
        joinable(li, rules_[i].rhs, y);
      }
    }
  }
}

auto build_category(const CategoryPresentation& p)
    -> std::shared_ptr<const GradingCategory> {
  auto cat = std::shared_ptr<GradingCategory>(new GradingCategory());
  cat->name_ = p.name;
  cat->source_ = p;
  cat->step_cap_ = p.step_cap;
  for (const auto& o : p.objects) {
    if (cat->object_index_.count(o) != 0) {
      fail(ErrorKind::DuplicateName, "object '" + o + "' declared twice");
    }
    cat->object_index_[o] = static_cast<int>(cat->objects_.size());
    cat->objects_.push_back(o);
  }
  for (const auto& g : p.generators) {
    if (cat->generator_index_.count(g.name) != 0) {
      fail(ErrorKind::DuplicateName,
           "generator '" + g.name + "' declared twice");
    }
    int dom = cat->object_named(g.dom).id;
    int cod = cat->object_named(g.cod).id;
    cat->generator_index_[g.name] = static_cast<int>(cat->generators_.size());
    cat->generators_.push_back({g.name, dom, cod, false});
  }
  for (const auto& w : p.wide) {
    auto g = cat->find_generator(w);
    if (!g) fail(ErrorKind::UnknownGenerator, "unknown generator '" + w + "'");
    cat->generators_[*g].wide = true;
  }
  auto lookup = [&](const std::vector<std::string>& names) {
    std::vector<int> out;
    for (const auto& n : names) {
      auto g = cat->find_generator(n);
      if (!g) {
        fail(ErrorKind::UnknownGenerator, "unknown generator '" + n + "'");
      }
      out.push_back(*g);
    }
    return out;
  };
  cat->rules_by_head_.assign(cat->generators_.size(), {});
  for (const auto& r : p.rules) {
    if (r.lhs.empty()) {
      fail(ErrorKind::NotComposable, "rule with an empty left-hand side");
    }
    GradingCategory::Rule rule{lookup(r.lhs), lookup(r.rhs.generators)};
    auto [ldom, lcod] = cat->path_endpoints(rule.lhs, "rule left-hand side");
    int rdom = ldom;
    int rcod = ldom;
    if (!rule.rhs.empty()) {
      std::tie(rdom, rcod) =
          cat->path_endpoints(rule.rhs, "rule right-hand side");
    } else if (r.rhs.identity) {
      rdom = rcod = cat->object_named(*r.rhs.identity).id;
    }
    if (ldom != rdom || lcod != rcod) {
      fail(ErrorKind::EndpointMismatch,
           "rule " + names_of(rule.lhs, *cat) + " = " +
               (rule.rhs.empty() ? std::string("id")
                                 : names_of(rule.rhs, *cat)) +
               " relates morphisms with different endpoints");
    }
    cat->rules_by_head_[rule.lhs.front()].push_back(
        static_cast<int>(cat->rules_.size()));
    cat->rules_.push_back(std::move(rule));
  }
  cat->check_termination();
  cat->check_confluence();
  return cat;
}

auto pair_generator_name(const std::string& a, const std::string& b)
    -> std::string {
  return "⟨" + a + "," + b + "⟩";
}

auto pair_completion(const GradingCategory& category, std::string name)
    -> std::shared_ptr<const GradingCategory> {
  CategoryPresentation p;
  p.name = name.empty() ? category.name() + "∇" : std::move(name);
  p.objects = category.source_.objects;
  p.generators = category.source_.generators;
  p.rules = category.source_.rules;
  p.step_cap = category.step_cap_;
  for (const auto& g : category.source_.generators) p.wide.push_back(g.name);
  const auto& objs = p.objects;
  for (const auto& a : objs) {
    for (const auto& b : objs) {
      p.generators.push_back({pair_generator_name(a, b), a, b});
    }
  }
  for (const auto& g : category.source_.generators) {
    for (const auto& c : objs) {
      // f.<b,c> = <a,c> and <c,a>.f = <c,b> for f : a -> b.
      p.rules.push_back({{g.name, pair_generator_name(g.cod, c)},
                         {{pair_generator_name(g.dom, c)}, std::nullopt}});
      p.rules.push_back({{pair_generator_name(c, g.dom), g.name},
                         {{pair_generator_name(c, g.cod)}, std::nullopt}});
    }
  }
  for (const auto& a : objs) {
    for (const auto& b : objs) {
      for (const auto& c : objs) {
        p.rules.push_back(
            {{pair_generator_name(a, b), pair_generator_name(b, c)},
             {{pair_generator_name(a, c)}, std::nullopt}});
      }
    }
  }
  auto built = build_category(p);
  auto cat = std::const_pointer_cast<GradingCategory>(built);
  cat->completion_of_ = category.name();
  return cat;
}

auto GradingFunctor::apply(Object a) const -> Object {
  if (a.category != source_.get()) {
    fail(ErrorKind::UnknownObject,
         "object is not in the source of functor " + name_);
  }
  return target_->object(object_map_[a.id]);
}

auto GradingFunctor::apply(const Morphism& m) const -> Morphism {
  if (!m.valid() || &m.category() != source_.get()) {
    fail(ErrorKind::UnknownGenerator,
         "morphism is not in the source of functor " + name_);
  }
  Morphism out = target_->identity(apply(m.dom()));
  for (int g : m.path()) out = target_->compose(out, images_[g]);
  return out;
}

auto build_functor(const FunctorPresentation& p,
                   std::shared_ptr<const GradingCategory> source,
                   std::shared_ptr<const GradingCategory> target)
    -> std::shared_ptr<const GradingFunctor> {
  auto f = std::shared_ptr<GradingFunctor>(new GradingFunctor());
  f->name_ = p.name;
  f->source_ = source;
  f->target_ = target;
  f->object_map_.assign(source->object_count(), -1);
  for (const auto& [from, to] : p.objects) {
    int s = source->object_named(from).id;
    if (f->object_map_[s] != -1) {
      fail(ErrorKind::InvalidFunctor, "object '" + from + "' mapped twice");
    }
    f->object_map_[s] = target->object_named(to).id;
  }
  for (int i = 0; i < source->object_count(); ++i) {
    if (f->object_map_[i] == -1) {
      fail(ErrorKind::InvalidFunctor, "functor " + p.name +
                                          " does not map object " +
                                          source->object_name(i));
    }
  }
  f->images_.assign(source->generator_count(), Morphism());
  for (const auto& [gen_name, spec] : p.generators) {
    auto g = source->find_generator(gen_name);
    if (!g) {
      fail(ErrorKind::UnknownGenerator,
           "unknown generator '" + gen_name + "' in " + source->name());
    }
    if (f->images_[*g].valid()) {
      fail(ErrorKind::InvalidFunctor,
           "generator '" + gen_name + "' mapped twice");
    }
    const auto& gen = source->generator(*g);
    Morphism image;
    if (spec.generators.empty() && !spec.identity) {
      image = target->identity(target->object(f->object_map_[gen.dom]));
    } else {
      image = target->resolve(spec);
    }
    if (image.dom().id != f->object_map_[gen.dom] ||
        image.cod().id != f->object_map_[gen.cod]) {
      fail(ErrorKind::EndpointMismatch,
           "image " + image.to_string() + " of " + gen_name +
               " does not respect endpoints");
    }
    f->images_[*g] = image;
  }
  for (int g = 0; g < source->generator_count(); ++g) {
    if (!f->images_[g].valid()) {
      fail(ErrorKind::InvalidFunctor, "functor " + p.name +
                                          " does not map generator " +
                                          source->generator(g).name);
    }
  }
  for (const auto& rule : source->rules()) {
    auto image_of = [&](const std::vector<int>& path, int dom) {
      Morphism out = target->identity(target->object(f->object_map_[dom]));
      for (int g : path) out = target->compose(out, f->images_[g]);
      return out;
    };
    int dom = source->generator(rule.lhs.front()).dom;
    if (image_of(rule.lhs, dom) != image_of(rule.rhs, dom)) {
      fail(ErrorKind::InvalidFunctor,
           "functor " + p.name + " does not preserve rule " +
               names_of(rule.lhs, *source) + " = " +
               (rule.rhs.empty() ? "id" : names_of(rule.rhs, *source)));
    }
  }
  return f;
}

auto identity_functor(std::shared_ptr<const GradingCategory> category)
    -> std::shared_ptr<const GradingFunctor> {
  FunctorPresentation p;
  p.name = "Id" + category->name();
  for (const auto& o : category->presentation().objects) {
    p.objects.push_back({o, o});
  }
  for (int g = 0; g < category->generator_count(); ++g) {
    p.generators.push_back(
        {category->generator(g).name, {{category->generator(g).name}, {}}});
  }
  return build_functor(p, category, category);
}

auto collapse_functor(std::shared_ptr<const GradingCategory> source,
                      std::shared_ptr<const GradingCategory> target)
    -> std::shared_ptr<const GradingFunctor> {
  if (target->object_count() != 1) {
    fail(ErrorKind::InvalidFunctor,
         "collapse target must have exactly one object");
  }
  FunctorPresentation p;
  p.name = "Collapse" + source->name();
  for (const auto& o : source->presentation().objects) {
    p.objects.push_back({o, target->object_name(0)});
  }
  for (int g = 0; g < source->generator_count(); ++g) {
    p.generators.push_back({source->generator(g).name, {}});
  }
  return build_functor(p, source, target);
}

}  // namespace cateff
