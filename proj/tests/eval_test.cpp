// Part of the CatEff project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <map>

#include "cateff/eval.hpp"

using namespace cateff;

namespace {

auto load(const std::string& file) -> Theory {
  return parse_file(std::string(CATEFF_PROGRAMS_DIR) + "/" + file);
}

}  // namespace

TEST(Eval, ContinuationGrades) {
  Theory t = load("handler.ceff");
  TypeChecker checker;
  const HandlerDecl& h = *t.handler("H");
  auto sig = t.signature("Sigma");
  Evaluator ev(sig, checker);

  Decomposition d = decompose(t.program("N")->body);
  ASSERT_EQ(d.shape, Decomposition::Shape::OpAtTop);
  EXPECT_EQ(ev.continuation_grade(d.frames, h, sig->op("op1")).to_string(),
            "h");

  CompPtr second = let("y", op_call("op2", star()),
                       val(sig->category().object_named("e"), var("y")));
  d = decompose(second);
  EXPECT_EQ(ev.continuation_grade(d.frames, h, sig->op("op2")).to_string(),
            "id_e");

  d = decompose(op_call("op1", star()));
  EXPECT_TRUE(d.frames.empty());
  EXPECT_EQ(ev.continuation_grade(d.frames, h, sig->op("op1")).to_string(),
            "id_d");

  auto sites = checker.op_sites({}, *sig, t.program("N")->body);
  std::map<std::string, std::string> by_op;
  for (const auto& s : sites) by_op[s.op] = s.continuation.to_string();
  EXPECT_EQ(sites.size(), 2u);
  EXPECT_EQ(by_op["op1"], "h");
  EXPECT_EQ(by_op["op2"], "id_e");
}

TEST(Eval, HandlerGoldenTrace) {
  Theory t = load("handler.ceff");
  TypeChecker checker;
  const Program& p = *t.program("handled");
  Evaluator ev(p.signature, checker);
  Trace tr = ev.run(p.body, 100);
  ASSERT_EQ(tr.steps(), 7u);
  EXPECT_EQ(tr.configurations[1].rule, "S-HandleOp");

  const auto* a = as<ast::App>(tr.configurations[1].term);
  ASSERT_NE(a, nullptr);
  const auto* l = as<ast::Lam>(a->fn);
  ASSERT_NE(l, nullptr);
  EXPECT_EQ(l->grade.to_string(), "id_•");
  const auto* hd = as<ast::Handle>(l->body);
  ASSERT_NE(hd, nullptr);
  const auto* let_x = as<ast::Let>(hd->body);
  ASSERT_NE(let_x, nullptr);
  EXPECT_EQ(let_x->var, "x");
  const auto* v = as<ast::Val>(let_x->bound);
  ASSERT_NE(v, nullptr);
  EXPECT_EQ(v->object.name(), "d");
  ASSERT_NE(as<ast::Var>(v->value), nullptr);
  EXPECT_EQ(as<ast::Var>(v->value)->name, l->var);
  EXPECT_EQ(to_source(a->arg), "inl () : 1 + 1");

  EXPECT_EQ(to_source(tr.final_term()),
            "val • (inl () : 1 + 1, inr () : 1 + 1 + 1)");
  EXPECT_EQ(tr.outcome, Decomposition::Shape::Value);
  for (const auto& c : tr.configurations) {
    ASSERT_TRUE(c.judgement.has_value());
    EXPECT_EQ(c.judgement->grade.to_string(), "id_•");
  }
}

TEST(Eval, TrivialApplication) {
  Theory t = load("handler.ceff");
  TypeChecker checker;
  auto sig = t.signature("Empty");
  Object dot = sig->category().object_named("•");
  CompPtr m = app(lam(sig->category().identity(dot), "x", Type::unit(),
                      val(dot, var("x"))),
                  star());
  Evaluator ev(sig, checker);
  auto s = ev.step(m);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->rule, "S-App");
  EXPECT_EQ(to_source(s->term), "val • ()");
  EXPECT_FALSE(ev.step(s->term).has_value());
  Trace tr = ev.run(s->term, 10);
  EXPECT_EQ(tr.steps(), 0u);
}

TEST(Eval, StepCap) {
  Theory t = load("handler.ceff");
  TypeChecker checker;
  const Program& p = *t.program("handled");
  Evaluator ev(p.signature, checker);
  try {
    ev.run(p.body, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MaxStepsExceeded);
  }
}

TEST(Eval, UnhandledOperationStops) {
  Theory t = load("handler.ceff");
  TypeChecker checker;
  const Program& p = *t.program("N");
  Evaluator ev(p.signature, checker);
  Trace tr = ev.run(p.body, 10);
  EXPECT_EQ(tr.steps(), 0u);
  EXPECT_EQ(tr.outcome, Decomposition::Shape::OpAtTop);
}

TEST(Eval, ProgramsPreserveTypeAndGrade) {
  for (const char* f :
       {"session.ceff", "handler.ceff", "mutable_store.ceff", "gunit.ceff"}) {
    Theory t = load(f);
    TypeChecker checker;
    for (const auto& p : t.programs) {
      Judgement j = checker.check_program(p);
      Evaluator ev(p.signature, checker);
      Trace tr = ev.run(p.body, 1000);
      for (const auto& c : tr.configurations) {
        EXPECT_EQ(c.judgement->grade, j.grade) << p.name;
        EXPECT_TRUE(type_equal(c.judgement->type, j.type)) << p.name;
      }
      if (tr.outcome == Decomposition::Shape::Value) {
        EXPECT_TRUE(as<ast::Val>(tr.final_term()) ||
                    as<ast::Weaken>(tr.final_term()))
            << p.name;
      }
    }
  }
}

TEST(Eval, StoreRunsToValue) {
  Theory t = load("mutable_store.ceff");
  TypeChecker checker;
  const Program& p = *t.program("stored");
  Evaluator ev(p.signature, checker);
  Trace tr = ev.run(p.body, 1000);
  EXPECT_EQ(tr.outcome, Decomposition::Shape::Value);
  ASSERT_NE(as<ast::Val>(tr.final_term()), nullptr);
  EXPECT_EQ(as<ast::Val>(tr.final_term())->object.name(), "store");
}
