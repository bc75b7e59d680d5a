// Part of the CatEff project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

// One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "cateff/conformance.hpp"
#include "cateff/denote.hpp"
#include "cateff/eval.hpp"

using namespace cateff;

namespace {

using Clock = std::chrono::steady_clock;

auto load(const std::string& file) -> Theory {
  return parse_file(std::string(CATEFF_PROGRAMS_DIR) + "/" + file);
}

const std::vector<std::string> kTheories = {"session.ceff", "handler.ceff",
                                            "mutable_store.ceff",
                                            "gunit.ceff"};

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail << what;
    ok = ok && cond;
  }
};

auto seconds_since(Clock::time_point start) -> double {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(const std::string& name, const std::function<void(Outcome&)>& body) {
  Outcome out;
  auto start = Clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("exception: ") + e.what());
  }
  double s = seconds_since(start);
  if (!out.ok) ++failures;
  std::cout << (out.ok ? "PASS " : "FAIL ") << name << " (" << s << " s)";
  std::string d = out.detail.str();
  if (!d.empty()) std::cout << ": " << d;
  std::cout << "\n";
}

void golden_grading(Outcome& out) {
  auto start = Clock::now();
  Theory t = load("session.ceff");
  TypeChecker checker;
  std::string tg = checker.check_program(*t.program("t")).grade.to_string();
  std::string sg = checker.check_program(*t.program("s")).grade.to_string();
  out.require(tg == "τ^1_int;send_int;recv^int_int", "t has grade " + tg);
  out.require(sg == "recv^1_int;send_int", "s has grade " + sg);
  out.require(seconds_since(start) < 1.0, "slower than 1 s");
}

void golden_trace(Outcome& out) {
  auto start = Clock::now();
  Theory t = load("handler.ceff");
  TypeChecker checker;
  const Program& p = *t.program("handled");
  Judgement j = checker.check_program(p);
  out.require(j.grade.to_string() == "id_•", "grade " + j.grade.to_string());
  Evaluator ev(p.signature, checker);
  Trace tr = ev.run(p.body, 1000);
  out.require(tr.steps() > 0 && tr.steps() < 20,
              "steps " + std::to_string(tr.steps()));
  const auto* a = as<ast::App>(tr.configurations.at(1).term);
  const ast::Lam* l = a ? as<ast::Lam>(a->fn) : nullptr;
  const ast::Handle* h = l ? as<ast::Handle>(l->body) : nullptr;
  const ast::Let* let_x = h ? as<ast::Let>(h->body) : nullptr;
  const ast::Val* v = let_x ? as<ast::Val>(let_x->bound) : nullptr;
  bool shape = v != nullptr && l->grade.to_string() == "id_•" &&
               let_x->var == "x" && v->object.name() == "d" &&
               as<ast::Var>(v->value) != nullptr &&
               as<ast::Var>(v->value)->name == l->var &&
               to_source(a->arg) == "inl () : 1 + 1";
  out.require(shape, "first step is " + to_source(tr.configurations.at(1).term));
  std::string last = to_source(tr.final_term());
  out.require(last == "val • (inl () : 1 + 1, inr () : 1 + 1 + 1)",
              "final " + last);
  out.require(seconds_since(start) < 1.0, "slower than 1 s");
}

void mutable_store(Outcome& out) {
  auto start = Clock::now();
  Theory t = load("mutable_store.ceff");
  TypeChecker checker;
  std::string n = checker.check_program(*t.program("N")).grade.to_string();
  out.require(n == "f^1_A;f^A_B", "N has grade " + n);
  auto u = Type::unit();
  auto a = Type::sum(u, u);
  auto b = Type::sum(Type::sum(u, u), u);
  auto store = Type::sum(u, Type::sum(a, b));
  for (auto [name, alpha] : std::vector<std::pair<std::string, TypePtr>>{
           {"H1", u}, {"HA", a}, {"HB", b}}) {
    HandlerProfile p = checker.check_handler(*t.handler(name));
    out.require(type_equal(p.handled, alpha) && type_equal(p.result, store),
                name + " has profile " + p.handled->to_string() + " => " +
                    p.result->to_string());
  }
  Judgement hb = checker.check_program(*t.program("handled_B"));
  out.require(hb.grade.is_identity(), "handled_B at " + hb.grade.to_string());

  const Program& s = *t.program("stored");
  checker.check_program(s);
  Evaluator ev(s.signature, checker);
  Trace tr = ev.run(s.body, 10000);
  const auto* v = as<ast::Val>(tr.final_term());
  out.require(v != nullptr, "stored ends at " + to_source(tr.final_term()));
  if (v != nullptr) {
    TreePtr tree = denote_computation({}, *s.signature, s.body);
    bool agree = tree->kind == TermTree::Kind::Leaf &&
                 tree->object == v->object &&
                 tree->payload == denote_value({}, *s.signature, v->value);
    out.require(agree, "evaluator and denotation disagree");
  }
  out.require(seconds_since(start) < 1.0, "slower than 1 s");
}

struct Suite {
  std::vector<ConformanceReport> reports;
  std::size_t generated = 0;
  double seconds = 0;
};

auto conformance_suite() -> const Suite& {
  static const Suite suite = [] {
    Suite s;
    auto start = Clock::now();
    for (const auto& f : kTheories) {
      Theory t = load(f);
      for (const auto& sig : t.signatures) {
        ConformanceOptions options;
        options.generation.count = 1000;
        options.generation.depth = 5;
        options.signature = sig->name();
        s.reports.push_back(run_conformance(t, options));
        s.generated += s.reports.back().generated;
      }
    }
    s.seconds = seconds_since(start);
    return s;
  }();
  return suite;
}

auto violations(const Suite& s, const std::vector<std::string>& checks)
    -> std::vector<Violation> {
  std::vector<Violation> out;
  for (const auto& r : s.reports) {
    for (const auto& v : r.violations) {
      for (const auto& c : checks) {
        if (v.check == c) out.push_back(v);
      }
    }
  }
  return out;
}

void describe(Outcome& out, const std::vector<Violation>& vs) {
  out.require(vs.empty(), std::to_string(vs.size()) + " violations, first: " +
                              (vs.empty() ? "" : vs[0].check + " " +
                                                     vs[0].subject + " " +
                                                     vs[0].message));
}

void soundness(Outcome& out) {
  const Suite& s = conformance_suite();
  std::size_t checked = 0;
  for (const auto& r : s.reports) checked += r.soundness.checked;
  out.require(s.generated >= 1000, "only " + std::to_string(s.generated) +
                                       " generated terms");
  out.require(checked >= 1000, "only " + std::to_string(checked) + " checked");
  describe(out, violations(s, {"soundness", "typecheck"}));
}

void adequacy(Outcome& out) {
  const Suite& s = conformance_suite();
  std::size_t checked = 0;
  for (const auto& r : s.reports) checked += r.adequacy.checked;
  out.require(checked > 0, "no applicable programs");
  describe(out, violations(s, {"adequacy", "termination"}));
}

void lemmas(Outcome& out) {
  const Suite& s = conformance_suite();
  std::size_t checked = 0;
  for (const auto& r : s.reports) checked += r.progress.checked;
  out.require(checked >= s.generated, "progress not checked on every term");
  describe(out, violations(s, {"progress", "preservation", "safety",
                               "factorization", "termination"}));
  out.require(s.seconds < 60.0, "slower than 60 s");
}

// Every model of `op : 1+1 ~> 1 @ g1` over the category with g1.g1 = g2 and
// g2.g1 = g1.g2, with carriers of size 1..3 at id, g1 and g2.
void universality(Outcome& out) {
  auto start = Clock::now();
  Theory t = parse_theory(R"(
category C {
  objects a;
  gen g1 : a -> a;
  gen g2 : a -> a;
  rule g1.g1 = g2;
  rule g2.g1 = g1.g2;
}
signature Sig over C {
  op op : 1 + 1 ~> 1 @ g1;
}
)");
  auto sig = t.signature("Sig");
  const auto& cat = sig->category();
  Object a = cat.object_named("a");
  Morphism id = cat.identity(a);
  Morphism g1 = cat.from_names({"g1"});
  Morphism g2 = cat.from_names({"g2"});
  out.require(cat.compose(g1, g1) == g2, "g1;g1 is not g2");
  const OpDecl& op = sig->op("op");
  SemValue x = SemValue::star();
  SemValue ps[2] = {SemValue::inl(SemValue::star()),
                    SemValue::inr(SemValue::star())};

  // Trees of depth <= 2 over x; level gives the carrier: 0 id, 1 g1, 2 g2.
  struct Shape {
    TreePtr tree;
    int level;
    int param;
    int child;
  };
  std::vector<Shape> shapes = {{leaf(a, x), 0, -1, -1}};
  for (int p = 0; p < 2; ++p) {
    shapes.push_back({node(op, ps[p], {shapes[0].tree}), 1, p, 0});
  }
  for (int q = 0; q < 2; ++q) {
    for (int p = 0; p < 2; ++p) {
      shapes.push_back({node(op, ps[p], {shapes[1 + q].tree}), 2, p, 1 + q});
    }
  }
  for (const auto& s : shapes) {
    Morphism expect = s.level == 0 ? id : s.level == 1 ? g1 : g2;
    out.require(s.tree->grade == expect, "tree grade " + s.tree->grade.to_string());
  }

  std::size_t models = 0;
  std::size_t failures_here = 0;
  for (int n0 = 1; n0 <= 3; ++n0) {
    for (int n1 = 1; n1 <= 3; ++n1) {
      for (int n2 = 1; n2 <= 3; ++n2) {
        int sizes[3] = {n0, n1, n2};
        // t0[p * n0 + v] in I(g1), t1[p * n1 + v] in I(g2).
        std::vector<int> t0(2 * n0, 0);
        std::vector<int> t1(2 * n1, 0);
        FiniteModel model(*sig, a);
        model.set_carrier(id, n0);
        model.set_carrier(g1, n1);
        model.set_carrier(g2, n2);
        auto index = [](const SemValue& p) {
          return p.kind() == SemValue::Kind::Inl ? 0 : 1;
        };
        model.set_interp("op", id,
                         [&t0, &index, n0](const SemValue& p,
                                           const std::vector<int>& v) {
                           return t0[index(p) * n0 + v[0]];
                         });
        model.set_interp("op", g1,
                         [&t1, &index, n1](const SemValue& p,
                                           const std::vector<int>& v) {
                           return t1[index(p) * n1 + v[0]];
                         });
        auto bump = [](std::vector<int>& table, int base) {
          for (auto& cell : table) {
            if (++cell < base) return true;
            cell = 0;
          }
          return false;
        };
        do {
          do {
            ++models;
            for (int phi = 0; phi < n0; ++phi) {
              auto ext = free_extension(
                  [phi](const SemValue&) { return phi; }, model);
              std::vector<int> h;
              for (const auto& s : shapes) h.push_back(ext(s.tree));
              bool hom = h[0] == phi;
              for (std::size_t i = 1; i < shapes.size(); ++i) {
                const Shape& s = shapes[i];
                int c = h[s.child];
                int want = s.level == 1 ? t0[s.param * n0 + c]
                                        : t1[s.param * n1 + c];
                hom = hom && h[i] == want;
              }
              // Count every leaf-agreeing homomorphism on the tree set.
              std::vector<int> cand(shapes.size(), 0);
              int solutions = 0;
              std::vector<int> found;
              std::function<void(std::size_t)> search = [&](std::size_t i) {
                if (solutions > 1) return;
                if (i == shapes.size()) {
                  ++solutions;
                  found = cand;
                  return;
                }
                const Shape& s = shapes[i];
                for (int v = 0; v < sizes[s.level]; ++v) {
                  cand[i] = v;
                  bool okv;
                  if (s.level == 0) {
                    okv = v == phi;
                  } else {
                    int c = cand[s.child];
                    okv = v == (s.level == 1 ? t0[s.param * n0 + c]
                                             : t1[s.param * n1 + c]);
                  }
                  if (okv) search(i + 1);
                }
              };
              search(0);
              if (!hom || solutions != 1 || found != h) ++failures_here;
            }
          } while (bump(t1, n2));
        } while (bump(t0, n1));
      }
    }
  }
  out.require(failures_here == 0,
              std::to_string(failures_here) + " failing model/assignment pairs");
  if (out.ok) out.detail << models << " models";
  out.require(seconds_since(start) < 30.0, "slower than 30 s");
}

void category_laws(Outcome& out) {
  std::size_t checks = 0;
  for (const auto& f : kTheories) {
    Theory t = load(f);
    for (const auto& c : t.categories) {
      for (const auto& p : c->composable_paths(6)) {
        auto n = c->normalize(p);
        out.require(c->normalize(n) == n, "normalize not idempotent in " + c->name());
        ++checks;
      }
      auto gens = c->composable_paths(1);
      for (const auto& f1 : gens) {
        Morphism m1 = c->generator_morphism(f1[0]);
        out.require(c->compose(c->identity(m1.dom()), m1) == m1 &&
                        c->compose(m1, c->identity(m1.cod())) == m1,
                    "unit law in " + c->name());
        for (const auto& f2 : gens) {
          Morphism m2 = c->generator_morphism(f2[0]);
          if (m2.dom() != m1.cod()) continue;
          for (const auto& f3 : gens) {
            Morphism m3 = c->generator_morphism(f3[0]);
            if (m3.dom() != m2.cod()) continue;
            out.require(c->compose(c->compose(m1, m2), m3) ==
                            c->compose(m1, c->compose(m2, m3)),
                        "associativity in " + c->name());
            ++checks;
          }
        }
      }
      if (!c->completion_of().empty()) {
        for (const auto& p : c->composable_paths(4)) {
          bool has_pair = false;
          for (int g : p) has_pair = has_pair || !c->generator(g).wide;
          if (!has_pair) continue;
          Morphism m = c->from_path(p);
          std::string want =
              pair_generator_name(c->object_name(c->generator(p.front()).dom),
                                  c->object_name(c->generator(p.back()).cod));
          out.require(m.path().size() == 1 &&
                          c->generator(m.path()[0]).name == want,
                      "pair completion absorbs into " + m.to_string());
          ++checks;
        }
      }
    }
    for (const auto& F : t.functors) {
      const auto& src = F->source();
      for (Object o : src.objects()) {
        out.require(F->apply(src.identity(o)) ==
                        F->target().identity(F->apply(o)),
                    "functor " + F->name() + " loses an identity");
      }
      for (const auto& p : src.composable_paths(2)) {
        if (p.size() != 2) continue;
        Morphism f1 = src.generator_morphism(p[0]);
        Morphism f2 = src.generator_morphism(p[1]);
        out.require(F->apply(src.compose(f1, f2)) ==
                        F->target().compose(F->apply(f1), F->apply(f2)),
                    "functor " + F->name() + " breaks a composite");
        ++checks;
      }
    }
  }
  if (out.ok) out.detail << checks << " checks";
}

}  // namespace

int main() {
  report("golden grading", golden_grading);
  report("golden trace", golden_trace);
  report("golden mutable-store judgements", mutable_store);
  report("soundness suite", soundness);
  report("adequacy suite", adequacy);
  report("progress/preservation/safety suite", lemmas);
  report("free-model universality", universality);
  report("category laws", category_laws);
  return failures == 0 ? 0 : 1;
}
