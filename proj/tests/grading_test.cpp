// Part of the CatEff project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "cateff/syntax.hpp"

using namespace cateff;

namespace {

auto load(const std::string& file) -> Theory {
  return parse_file(std::string(CATEFF_PROGRAMS_DIR) + "/" + file);
}

auto test_categories() -> std::vector<std::shared_ptr<const GradingCategory>> {
  std::vector<std::shared_ptr<const GradingCategory>> out;
  for (const char* f :
       {"session.ceff", "handler.ceff", "mutable_store.ceff", "gunit.ceff"}) {
    Theory t = load(f);
    out.insert(out.end(), t.categories.begin(), t.categories.end());
  }
  return out;
}

auto kind_of(const std::function<void()>& f) -> std::optional<ErrorKind> {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

// Reduces a Session path by hand: adjacent τ arrows merge into one τ from the
// first domain to the last codomain, and τ^a_a disappears.
auto session_oracle(const GradingCategory& c, const std::vector<int>& path)
    -> std::vector<std::string> {
  struct Item {
    std::string name;
    bool tau;
    std::string dom, cod;
  };
  std::vector<Item> stack;
  auto tau_name = [](const std::string& a, const std::string& b) {
    return "τ^" + a + "_" + b;
  };
  for (int g : path) {
    const auto& gen = c.generator(g);
    Item item{gen.name, gen.name.rfind("τ", 0) == 0, c.object_name(gen.dom),
              c.object_name(gen.cod)};
    if (item.tau && !stack.empty() && stack.back().tau) {
      item.dom = stack.back().dom;
      item.name = tau_name(item.dom, item.cod);
      stack.pop_back();
    }
    stack.push_back(item);
    if (stack.back().tau && stack.back().dom == stack.back().cod) {
      stack.pop_back();
    }
  }
  std::vector<std::string> out;
  for (const auto& i : stack) out.push_back(i.name);
  return out;
}

auto names(const GradingCategory& c, const std::vector<int>& path)
    -> std::vector<std::string> {
  std::vector<std::string> out;
  for (int g : path) out.push_back(c.generator(g).name);
  return out;
}

}  // namespace

TEST(Grading, SessionCompositions) {
  Theory t = load("session.ceff");
  auto s = t.category("Session");
  Morphism up = s->from_names({"τ^1_int"});
  Morphism down = s->from_names({"τ^int_1"});
  EXPECT_EQ(s->compose(up, down), s->identity(s->object_named("1")));
  EXPECT_EQ(s->compose(up, down).to_string(), "id_1");
  EXPECT_EQ(s->compose(up, s->from_names({"send_int"})).to_string(),
            "τ^1_int;send_int");
  EXPECT_EQ(s->from_names({"τ^1_1"}).to_string(), "id_1");
}

TEST(Grading, SessionNormalFormsMatchOracle) {
  auto s = load("session.ceff").category("Session");
  std::size_t checked = 0;
  for (const auto& p : s->composable_paths(5)) {
    ASSERT_EQ(names(*s, s->normalize(p)), session_oracle(*s, p))
        << s->from_path(p).to_string();
    ++checked;
  }
  EXPECT_GT(checked, 1000u);
}

TEST(Grading, NormalizeIsIdempotent) {
  for (const auto& c : test_categories()) {
    for (const auto& p : c->composable_paths(6)) {
      auto n = c->normalize(p);
      ASSERT_EQ(c->normalize(n), n) << c->name();
    }
  }
}

TEST(Grading, AssociativityAndUnits) {
  for (const auto& c : test_categories()) {
    std::vector<Morphism> ms;
    for (Object a : c->objects()) {
      for (Object b : c->objects()) {
        for (auto& m : c->hom(a, b, 2)) ms.push_back(m);
      }
    }
    for (const auto& f : ms) {
      EXPECT_EQ(c->compose(c->identity(f.dom()), f), f);
      EXPECT_EQ(c->compose(f, c->identity(f.cod())), f);
      for (const auto& g : ms) {
        if (g.dom() != f.cod()) continue;
        for (const auto& h : ms) {
          if (h.dom() != g.cod()) continue;
          ASSERT_EQ(c->compose(c->compose(f, g), h),
                    c->compose(f, c->compose(g, h)))
              << c->name() << " " << f.to_string() << " " << g.to_string()
              << " " << h.to_string();
        }
      }
    }
  }
}

TEST(Grading, FunctorLaws) {
  std::vector<std::shared_ptr<const GradingFunctor>> functors;
  for (const char* f :
       {"session.ceff", "handler.ceff", "mutable_store.ceff", "gunit.ceff"}) {
    Theory t = load(f);
    functors.insert(functors.end(), t.functors.begin(), t.functors.end());
  }
  ASSERT_FALSE(functors.empty());
  for (const auto& F : functors) {
    const auto& src = F->source();
    const auto& dst = F->target();
    for (Object a : src.objects()) {
      EXPECT_EQ(F->apply(src.identity(a)), dst.identity(F->apply(a)));
    }
    for (const auto& p : src.composable_paths(2)) {
      Morphism f = src.generator_morphism(p[0]);
      EXPECT_EQ(F->apply(f).dom(), F->apply(f.dom()));
      EXPECT_EQ(F->apply(f).cod(), F->apply(f.cod()));
      if (p.size() < 2) continue;
      Morphism g = src.generator_morphism(p[1]);
      EXPECT_EQ(F->apply(src.compose(f, g)),
                dst.compose(F->apply(f), F->apply(g)))
          << F->name();
    }
  }
}

TEST(Grading, CollapseSendsGeneratorsToIdentity) {
  Theory t = load("handler.ceff");
  auto G = t.functor("G");
  auto S = t.category("S");
  EXPECT_EQ(G->apply(S->from_names({"g"})).to_string(), "id_•");
}

TEST(Grading, PairCompletionAbsorbs) {
  Theory t = load("gunit.ceff");
  auto T = t.category("T");
  for (const auto& p : T->composable_paths(4)) {
    bool has_pair = false;
    for (int g : p) has_pair = has_pair || !T->generator(g).wide;
    if (!has_pair) continue;
    Morphism m = T->from_path(p);
    ASSERT_EQ(m.path().size(), 1u);
    const auto& gen = T->generator(m.path()[0]);
    EXPECT_FALSE(gen.wide);
    EXPECT_EQ(gen.name,
              pair_generator_name(T->object_name(T->generator(p.front()).dom),
                                  T->object_name(T->generator(p.back()).cod)));
  }
  EXPECT_TRUE(T->in_wide(T->from_names({"g", "h"})));
  EXPECT_FALSE(T->in_wide(T->from_names({pair_generator_name("c", "d")})));
}

TEST(Grading, PairCompletionOfDiscreteCategory) {
  CategoryPresentation p;
  p.name = "D";
  p.objects = {"a", "b"};
  auto d = build_category(p);
  auto dt = pair_completion(*d);
  auto hom = dt->hom(dt->object_named("a"), dt->object_named("b"), 3);
  ASSERT_EQ(hom.size(), 1u);
  EXPECT_EQ(hom[0].to_string(), "⟨a,b⟩");
  EXPECT_EQ(d->hom(d->object_named("a"), d->object_named("a"), 3).size(), 1u);
}

TEST(Grading, Errors) {
  auto base = [] {
    CategoryPresentation p;
    p.name = "C";
    p.objects = {"a", "b", "c"};
    return p;
  };
  EXPECT_EQ(kind_of([&] {
              auto p = base();
              p.generators = {{"f", "a", "b"}, {"g", "a", "c"}};
              p.rules = {{{"f"}, {{"g"}, std::nullopt}}};
              build_category(p);
            }),
            ErrorKind::EndpointMismatch);
  EXPECT_EQ(kind_of([&] {
              auto p = base();
              p.generators = {{"g", "a", "a"}};
              p.rules = {{{"g"}, {{"g", "g"}, std::nullopt}}};
              build_category(p);
            }),
            ErrorKind::NonTerminatingRules);
  EXPECT_EQ(kind_of([&] {
              auto p = base();
              for (const char* n : {"p", "q", "r", "s", "t"}) {
                p.generators.push_back({n, "a", "a"});
              }
              p.rules = {{{"p", "q"}, {{"r"}, std::nullopt}},
                         {{"q", "s"}, {{"t"}, std::nullopt}}};
              build_category(p);
            }),
            ErrorKind::NonConfluentRules);
  auto p = base();
  p.generators = {{"f", "a", "b"}};
  auto c = build_category(p);
  EXPECT_EQ(kind_of([&] { c->from_names({"nope"}); }),
            ErrorKind::UnknownGenerator);
  EXPECT_EQ(kind_of([&] {
              c->compose(c->from_names({"f"}), c->from_names({"f"}));
            }),
            ErrorKind::NotComposable);
}

TEST(Grading, NoGeneratorsOnlyIdentities) {
  CategoryPresentation p;
  p.name = "Two";
  p.objects = {"a", "b"};
  auto c = build_category(p);
  EXPECT_EQ(c->hom(c->object_named("a"), c->object_named("a"), 3).size(), 1u);
  EXPECT_TRUE(c->hom(c->object_named("a"), c->object_named("b"), 3).empty());
}

TEST(Grading, RandomLongPathsIdempotent) {
  auto s = load("session.ceff").category("Session");
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    std::vector<int> p;
    int at = static_cast<int>(rng() % 2);
    for (int n = 0; n < 12; ++n) {
      std::vector<int> out;
      for (int g = 0; g < s->generator_count(); ++g) {
        if (s->generator(g).dom == at) out.push_back(g);
      }
      int g = out[rng() % out.size()];
      p.push_back(g);
      at = s->generator(g).cod;
    }
    auto n = s->normalize(p);
    EXPECT_EQ(s->normalize(n), n);
    EXPECT_EQ(names(*s, n), session_oracle(*s, p));
  }
}
