// Part of the CatEff project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "cateff/freemodel.hpp"
#include "cateff/syntax.hpp"

using namespace cateff;

namespace {

const char* kTheory = R"(
category C {
  objects a;
  gen g1 : a -> a;
  gen g2 : a -> a;
  rule g1.g1 = g2;
  rule g2.g1 = g1.g2;
}
signature Sig over C {
  op flip : 1 ~> 1 + 1 @ g1;
  op tag : 1 + 1 ~> 1 @ g2;
}
)";

class FreeModel : public ::testing::Test {
 protected:
  FreeModel()
      : theory_(parse_theory(kTheory)),
        sig_(theory_.signature("Sig")),
        cat_(sig_->category_ptr()),
        a_(cat_->object_named("a")),
        flip_(sig_->op("flip")),
        tag_(sig_->op("tag")) {}

  auto x() const -> SemValue { return SemValue::inl(SemValue::star()); }
  auto y() const -> SemValue { return SemValue::inr(SemValue::star()); }
  auto m(const std::string& path) const -> Morphism {
    return cat_->from_names({path});
  }

  // Trees at object a over leaves x and y, grouped by grade.
  auto trees() const -> std::vector<TreePtr> {
    std::vector<TreePtr> level = {leaf(a_, x()), leaf(a_, y())};
    std::vector<TreePtr> all = level;
    for (int depth = 0; depth < 2; ++depth) {
      std::vector<TreePtr> next;
      for (const auto& l : level) {
        for (const auto& r : level) {
          if (l->grade != r->grade) continue;
          next.push_back(node(flip_, SemValue::star(), {l, r}));
        }
        next.push_back(node(tag_, x(), {l}));
        next.push_back(coerce(m("g1"), l));
      }
      all.insert(all.end(), next.begin(), next.end());
      level = next;
    }
    return all;
  }

  Theory theory_;
  std::shared_ptr<const GradedSignature> sig_;
  std::shared_ptr<const GradingCategory> cat_;
  Object a_;
  const OpDecl& flip_;
  const OpDecl& tag_;
};

// Structural substitution written out case by case.
auto substitute_leaves(const TreePtr& t, const LeafMap& phi) -> TreePtr {
  switch (t->kind) {
    case TermTree::Kind::Leaf:
      return phi(t->payload);
    case TermTree::Kind::Node: {
      auto copy = std::make_shared<TermTree>(*t);
      copy->children.clear();
      for (const auto& c : t->children) {
        copy->children.push_back(substitute_leaves(c, phi));
      }
      copy->k = copy->children.front()->grade;
      copy->grade = t->op_grade.category().compose(t->op_grade, copy->k);
      return copy;
    }
    case TermTree::Kind::Coerce: {
      TreePtr inner = substitute_leaves(t->child, phi);
      Morphism r = t->r;
      if (inner->kind == TermTree::Kind::Coerce) {
        r = r.category().compose(r, inner->r);
        inner = inner->child;
      }
      auto copy = std::make_shared<TermTree>(*t);
      copy->r = r;
      copy->child = inner;
      copy->grade = r.category().compose(r, inner->grade);
      return copy;
    }
  }
  return t;
}

}  // namespace

TEST_F(FreeModel, GraftHandExpanded) {
  TreePtr t = node(flip_, SemValue::star(), {leaf(a_, x()), leaf(a_, y())});
  LeafMap phi = [&](const SemValue& v) {
    return node(tag_, v, {leaf(a_, SemValue::pair(v, v))});
  };
  TreePtr expect = node(
      flip_, SemValue::star(),
      {node(tag_, x(), {leaf(a_, SemValue::pair(x(), x()))}),
       node(tag_, y(), {leaf(a_, SemValue::pair(y(), y()))})});
  TreePtr got = graft(t, phi);
  EXPECT_TRUE(tree_equal(got, expect));
  EXPECT_EQ(got->grade.to_string(), "g1;g2");
  EXPECT_TRUE(tree_equal(graft(leaf(a_, x()), phi), phi(x())));
}

TEST_F(FreeModel, GraftAgreesWithStructuralOracle) {
  std::vector<LeafMap> maps = {
      [&](const SemValue& v) { return leaf(a_, v); },
      [&](const SemValue& v) { return node(tag_, v, {leaf(a_, v)}); },
      [&](const SemValue& v) { return coerce(m("g1"), leaf(a_, v)); },
      [&](const SemValue&) {
        return node(flip_, SemValue::star(),
                    {leaf(a_, SemValue::star()), leaf(a_, SemValue::star())});
      },
  };
  for (const auto& t : trees()) {
    for (const auto& phi : maps) {
      TreePtr got = graft(t, phi);
      ASSERT_TRUE(tree_equal(got, substitute_leaves(t, phi))) << to_text(t);
      EXPECT_EQ(got->grade, cat_->compose(t->grade, phi(x())->grade));
    }
  }
}

TEST_F(FreeModel, GraftMonadLaws) {
  LeafMap unit = [&](const SemValue& v) { return leaf(a_, v); };
  LeafMap phi = [&](const SemValue& v) {
    return node(flip_, SemValue::star(), {leaf(a_, v), leaf(a_, x())});
  };
  LeafMap psi = [&](const SemValue& v) {
    return coerce(m("g1"), node(tag_, v, {leaf(a_, v)}));
  };
  for (const auto& t : trees()) {
    EXPECT_TRUE(tree_equal(graft(t, unit), t));
    TreePtr left = graft(graft(t, phi), psi);
    TreePtr right =
        graft(t, [&](const SemValue& v) { return graft(phi(v), psi); });
    ASSERT_TRUE(tree_equal(left, right)) << to_text(t);
  }
}

TEST_F(FreeModel, CoerceNormalizes) {
  TreePtr l = leaf(a_, x());
  EXPECT_EQ(coerce(cat_->identity(a_), l), l);
  TreePtr c = coerce(m("g1"), coerce(m("g1"), l));
  ASSERT_EQ(c->kind, TermTree::Kind::Coerce);
  EXPECT_EQ(c->r.to_string(), "g2");
  EXPECT_EQ(c->child->kind, TermTree::Kind::Leaf);
  EXPECT_EQ(c->grade.to_string(), "g2");
}

TEST_F(FreeModel, GradeHeterogeneousChildren) {
  EXPECT_THROW(node(flip_, SemValue::star(),
                    {leaf(a_, x()), coerce(m("g1"), leaf(a_, x()))}),
               Error);
  EXPECT_THROW(graft(node(flip_, SemValue::star(),
                          {leaf(a_, x()), leaf(a_, y())}),
                     [&](const SemValue& v) {
                       return v == x() ? leaf(a_, v)
                                       : coerce(m("g1"), leaf(a_, v));
                     }),
               Error);
}

TEST_F(FreeModel, FreeExtensionIsHomomorphism) {
  Morphism id = cat_->identity(a_);
  Morphism g1 = m("g1");
  std::size_t checked = 0;
  for (int n0 = 1; n0 <= 2; ++n0) {
    for (int n1 = 1; n1 <= 2; ++n1) {
      int tables = 1;
      for (int i = 0; i < n0 * n0; ++i) tables *= n1;
      for (int table = 0; table < tables; ++table) {
        FiniteModel model(*sig_, a_);
        model.set_carrier(id, n0);
        model.set_carrier(g1, n1);
        std::vector<int> out;
        for (int i = 0, rest = table; i < n0 * n0; ++i, rest /= n1) {
          out.push_back(rest % n1);
        }
        model.set_interp("flip", id,
                         [out, n0](const SemValue&, const std::vector<int>& v) {
                           return out[v[0] * n0 + v[1]];
                         });
        for (int px = 0; px < n0; ++px) {
          for (int py = 0; py < n0; ++py) {
            Assignment phi = [&](const SemValue& v) {
              return v == SemValue::inl(SemValue::star()) ? px : py;
            };
            auto ext = free_extension(phi, model);
            EXPECT_EQ(ext(leaf(a_, x())), px);
            for (const auto& l : {leaf(a_, x()), leaf(a_, y())}) {
              for (const auto& r : {leaf(a_, x()), leaf(a_, y())}) {
                TreePtr t = node(flip_, SemValue::star(), {l, r});
                int v = ext(t);
                EXPECT_EQ(v, model.interp("flip", id)(SemValue::star(),
                                                      {ext(l), ext(r)}));
                EXPECT_EQ(v, interpret_term(*t, model, id, phi));
                ++checked;
              }
            }
          }
        }
      }
    }
  }
  EXPECT_GT(checked, 100u);
}

TEST_F(FreeModel, CheckEquationsFindsWitness) {
  Morphism id = cat_->identity(a_);
  Equation comm{node(flip_, SemValue::star(), {leaf(a_, x()), leaf(a_, y())}),
                node(flip_, SemValue::star(), {leaf(a_, y()), leaf(a_, x())})};
  FiniteModel first(*sig_, a_);
  first.set_carrier(id, 2);
  first.set_carrier(m("g1"), 2);
  first.set_interp("flip", id,
                   [](const SemValue&, const std::vector<int>& v) { return v[0]; });
  auto bad = check_equations({comm}, first);
  ASSERT_FALSE(bad.empty());
  int lx = -1;
  int ly = -1;
  for (const auto& [var, value] : bad.front().env) {
    (var == x() ? lx : ly) = value;
  }
  EXPECT_NE(lx, ly);
  EXPECT_EQ(bad.front().lhs_value, lx);
  EXPECT_EQ(bad.front().rhs_value, ly);

  FiniteModel sum(*sig_, a_);
  sum.set_carrier(id, 2);
  sum.set_carrier(m("g1"), 2);
  sum.set_interp("flip", id, [](const SemValue&, const std::vector<int>& v) {
    return (v[0] + v[1]) % 2;
  });
  EXPECT_TRUE(check_equations({comm}, sum).empty());

  Equation skew{leaf(a_, x()), comm.lhs};
  try {
    check_equations({skew}, sum);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GradeMismatchInEquation);
  }
}

TEST_F(FreeModel, FunctionPayloadsAreNotComparable) {
  SemValue f = SemValue::fun([&](const SemValue& v) { return leaf(a_, v); });
  try {
    tree_equal(leaf(a_, f), leaf(a_, f));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonComparable);
  }
}
