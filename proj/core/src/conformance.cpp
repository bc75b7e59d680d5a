// Part of the CatEff project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "cateff/conformance.hpp"

#include <json.hpp>
#include <random>
#include <sstream>

#include "cateff/denote.hpp"

namespace cateff {

auto verify_soundness_along_trace(const CompPtr& m,
                                  std::shared_ptr<const GradedSignature> sig,
                                  TypeChecker& checker, std::size_t max_steps)
    -> SoundnessReport {
  Judgement j = checker.grade_of_computation(Context(), *sig, m);
  if (!j.type->is_primitive()) {
    fail(ErrorKind::NonComparable, "result type " + j.type->to_string() +
                                       " is not primitive");
  }
  Evaluator ev(sig, checker);
  Trace trace = ev.run(m, max_steps);
  SoundnessReport report;
  report.steps = trace.steps();
  TreePtr prev = denote_computation({}, *sig, m);
  for (std::size_t i = 1; i < trace.configurations.size(); ++i) {
    const Configuration& c = trace.configurations[i];
    TreePtr cur = denote_computation({}, *sig, c.term);
    if (!tree_equal(prev, cur)) {
      report.ok = false;
      report.divergence = i;
      report.rule = c.rule;
      report.before = to_json(prev);
      report.after = to_json(cur);
      return report;
    }
    prev = cur;
  }
  return report;
}

auto verify_adequacy(const CompPtr& m,
                     std::shared_ptr<const GradedSignature> sig,
                     TypeChecker& checker, std::size_t max_steps)
    -> AdequacyReport {
  AdequacyReport report;
  TreePtr t = denote_computation({}, *sig, m);
  if (t->kind != TermTree::Kind::Leaf ||
      t->payload.kind() != SemValue::Kind::Star) {
    return report;
  }
  report.applicable = true;
  Evaluator ev(sig, checker);
  try {
    Trace trace = ev.run(m, max_steps);
    report.steps = trace.steps();
    const auto* v = as<ast::Val>(trace.final_term());
    if (v == nullptr || v->object != t->object ||
        as<ast::Star>(v->value) == nullptr) {
      report.ok = false;
      report.message = "ended in '" + to_source(trace.final_term()) +
                       "', expected val_" + t->object.name() + " ()";
    }
  } catch (const Error& e) {
    report.ok = false;
    report.message = e.what();
  }
  return report;
}

namespace {

using Ctx = std::vector<std::pair<std::string, TypePtr>>;

struct Gen {
  CompPtr term;
  TypePtr type;
  Morphism grade;
};

struct Mode {
  // Avoid operations and coercions; used for identity-graded terms.
  bool pure = false;
  // Inside a handled computation, where ops behind variables would escape
  // the static clause check.
  bool in_handle = false;
};

auto with(const Ctx& ctx, std::string x, TypePtr t) -> Ctx {
  Ctx out = ctx;
  out.emplace_back(std::move(x), std::move(t));
  return out;
}

auto primitive_part(const Ctx& ctx) -> Ctx {
  Ctx out;
  for (const auto& e : ctx) {
    if (e.second->is_primitive()) out.push_back(e);
  }
  return out;
}

auto has_default_everywhere(const HandlerDecl& h) -> bool {
  for (const auto& op : h.source->ops()) {
    if (!h.has_default(op.name)) return false;
  }
  return true;
}

class Generator {
 public:
  Generator(const Theory& theory, std::uint64_t seed) : rng_(seed) {
    for (const auto& h : theory.handlers) {
      if (has_default_everywhere(*h)) pool_.push_back(h);
    }
    add_type(Type::unit());
    add_type(Type::sum(Type::unit(), Type::unit()));
    add_type(Type::prod(Type::unit(), Type::sum(Type::unit(), Type::unit())));
    for (const auto& s : theory.signatures) {
      for (const auto& op : s->ops()) {
        add_type(op.param);
        add_type(op.arity);
      }
    }
    for (const auto& h : pool_) {
      add_type(h->handled);
      add_type(h->result);
    }
  }

  auto pick(std::size_t n) -> std::size_t { return rng_() % n; }
  auto coin() -> bool { return pick(2) == 0; }

  auto random_type() -> TypePtr { return types_[pick(types_.size())]; }

  auto random_object(const GradingCategory& cat) -> Object {
    return cat.object(static_cast<int>(pick(
        static_cast<std::size_t>(cat.object_count()))));
  }

  void reset_names() { counter_ = 0; }

  auto comp(const Ctx& ctx, const GradedSignature& sig, Object a,
            std::size_t depth, const TypePtr& want, Mode mode)
      -> std::optional<Gen> {
    if (depth == 0) return val_option(ctx, a, want);
    // Let and Op carry most of the weight.
    static constexpr int kWeights[] = {1, 3, 5, 1, 1, 2, 1, 2};
    int total = 0;
    for (int w : kWeights) total += w;
    for (int attempt = 0; attempt < 4; ++attempt) {
      int r = static_cast<int>(pick(static_cast<std::size_t>(total)));
      int choice = 0;
      while (r >= kWeights[choice]) r -= kWeights[choice++];
      std::optional<Gen> g;
      switch (choice) {
        case 0: g = val_option(ctx, a, want); break;
        case 1: g = op_option(ctx, sig, a, want, mode); break;
        case 2: g = let_option(ctx, sig, a, depth, want, mode); break;
        case 3: g = case_option(ctx, sig, a, depth, want, mode); break;
        case 4: g = split_option(ctx, sig, a, depth, want, mode); break;
        case 5: g = app_option(ctx, sig, a, depth, want, mode); break;
        case 6: g = weaken_option(ctx, sig, a, depth, want, mode); break;
        case 7: g = handle_option(ctx, sig, a, depth, want, mode); break;
      }
      if (g) return g;
    }
    return val_option(ctx, a, want);
  }

 private:
  void add_type(const TypePtr& t) {
    if (!t->is_primitive()) return;
    for (const auto& u : types_) {
      if (type_equal(u, t)) return;
    }
    types_.push_back(t);
  }

  auto fresh(const std::string& base) -> std::string {
    return base + std::to_string(counter_++);
  }

  auto value(const Ctx& ctx, const TypePtr& t) -> ValuePtr {
    std::vector<std::string> vars;
    for (const auto& e : ctx) {
      if (type_equal(e.second, t)) vars.push_back(e.first);
    }
    if (!vars.empty() && coin()) return var(vars[pick(vars.size())]);
    switch (t->kind()) {
      case Type::Kind::Unit: return star();
      case Type::Kind::Prod:
        return pair(value(ctx, t->left()), value(ctx, t->right()));
      case Type::Kind::Sum:
        if (coin()) return inl(value(ctx, t->left()), t);
        return inr(value(ctx, t->right()), t);
      case Type::Kind::Arrow: break;
    }
    fail(ErrorKind::GenerationExhausted,
         "no value of function type " + t->to_string() + " in scope");
  }

  auto val_option(const Ctx& ctx, Object a, const TypePtr& want)
      -> std::optional<Gen> {
    TypePtr t = want ? want : random_type();
    return Gen{val(a, value(ctx, t)), t, a.category->identity(a)};
  }

  auto op_option(const Ctx& ctx, const GradedSignature& sig, Object a,
                 const TypePtr& want, Mode mode) -> std::optional<Gen> {
    if (mode.pure) return std::nullopt;
    std::vector<const OpDecl*> ops;
    for (const auto& op : sig.ops()) {
      if (op.grade.dom() != a) continue;
      if (want && !type_equal(want, op.arity)) continue;
      ops.push_back(&op);
    }
    if (ops.empty()) return std::nullopt;
    const OpDecl& op = *ops[pick(ops.size())];
    return Gen{op_call(op.name, value(ctx, op.param)), op.arity, op.grade};
  }

  auto let_option(const Ctx& ctx, const GradedSignature& sig, Object a,
                  std::size_t depth, const TypePtr& want, Mode mode)
      -> std::optional<Gen> {
    std::optional<Gen> first;
    if (coin()) first = op_option(ctx, sig, a, nullptr, mode);
    if (!first) first = comp(ctx, sig, a, depth - 1, nullptr, mode);
    if (!first) return std::nullopt;
    std::string x = fresh("x");
    auto second = comp(with(ctx, x, first->type), sig, first->grade.cod(),
                       depth - 1, want, mode);
    if (!second) return std::nullopt;
    return Gen{let(x, first->term, second->term), second->type,
               sig.category().compose(first->grade, second->grade)};
  }

  auto case_option(const Ctx& ctx, const GradedSignature& sig, Object a,
                   std::size_t depth, const TypePtr& want, Mode mode)
      -> std::optional<Gen> {
    std::vector<TypePtr> sums;
    for (const auto& t : types_) {
      if (t->kind() == Type::Kind::Sum) sums.push_back(t);
    }
    TypePtr t = sums[pick(sums.size())];
    ValuePtr scrutinee = value(ctx, t);
    std::string x = fresh("l");
    auto left = comp(with(ctx, x, t->left()), sig, a, depth - 1, want, mode);
    if (!left) return std::nullopt;
    std::string y = fresh("r");
    Ctx rctx = with(ctx, y, t->right());
    auto right = comp(rctx, sig, a, depth - 1, left->type, mode);
    CompPtr rterm;
    if (right && right->grade == left->grade) {
      rterm = right->term;
    } else {
      rterm = let(x, val(a, value(rctx, t->left())), left->term);
    }
    return Gen{case_of(scrutinee, x, left->term, y, rterm), left->type,
               left->grade};
  }

  auto split_option(const Ctx& ctx, const GradedSignature& sig, Object a,
                    std::size_t depth, const TypePtr& want, Mode mode)
      -> std::optional<Gen> {
    TypePtr t = Type::prod(random_type(), random_type());
    std::string x = fresh("p");
    std::string y = fresh("q");
    auto body = comp(with(with(ctx, x, t->left()), y, t->right()), sig, a,
                     depth - 1, want, mode);
    if (!body) return std::nullopt;
    return Gen{split(value(ctx, t), x, y, body->term), body->type,
               body->grade};
  }

  auto app_option(const Ctx& ctx, const GradedSignature& sig, Object a,
                  std::size_t depth, const TypePtr& want, Mode mode)
      -> std::optional<Gen> {
    TypePtr t = random_type();
    std::string x = fresh("v");
    auto body = comp(with(ctx, x, t), sig, a, depth - 1, want, mode);
    if (!body) return std::nullopt;
    ValuePtr fn = lam(body->grade, x, t, body->term);
    ValuePtr arg = value(ctx, t);
    if (mode.in_handle || coin()) {
      return Gen{app(fn, arg), body->type, body->grade};
    }
    std::string f = fresh("f");
    return Gen{let(f, val(a, fn), app(var(f), arg)), body->type, body->grade};
  }

  auto wide_from(const GradingCategory& cat, Object a) -> std::vector<Morphism> {
    std::vector<Morphism> out;
    for (Object b : cat.objects()) {
      for (std::size_t len = 0; len <= 2; ++len) {
        for (const auto& m : cat.hom(a, b, len)) {
          if (cat.in_wide(m)) out.push_back(m);
        }
      }
    }
    return out;
  }

  auto weaken_option(const Ctx& ctx, const GradedSignature& sig, Object a,
                     std::size_t depth, const TypePtr& want, Mode mode)
      -> std::optional<Gen> {
    if (mode.pure) return std::nullopt;
    const GradingCategory& cat = sig.category();
    auto pres = wide_from(cat, a);
    if (pres.empty()) return std::nullopt;
    Morphism pre = pres[pick(pres.size())];
    auto body = comp(ctx, sig, pre.cod(), depth - 1, want, mode);
    if (!body) return std::nullopt;
    auto posts = wide_from(cat, body->grade.cod());
    Morphism post = posts[pick(posts.size())];
    return Gen{weaken(pre, body->term, post), body->type,
               cat.compose(cat.compose(pre, body->grade), post)};
  }

  auto handle_option(const Ctx& ctx, const GradedSignature& sig, Object a,
                     std::size_t depth, const TypePtr& want, Mode mode)
      -> std::optional<Gen> {
    std::vector<std::pair<HandlerPtr, Object>> fits;
    for (const auto& h : pool_) {
      if (h->target.get() != &sig) continue;
      if (want && !type_equal(want, h->result)) continue;
      for (Object a0 : h->source->category().objects()) {
        if (h->functor->apply(a0) == a) fits.emplace_back(h, a0);
      }
    }
    if (fits.empty()) return std::nullopt;
    auto [h, a0] = fits[pick(fits.size())];
    Ctx inner = primitive_part(ctx);
    for (int attempt = 0; attempt < 4; ++attempt) {
      auto body = comp(inner, *h->source, a0, depth - 1, h->handled,
                       Mode{false, true});
      if (!body || body->grade.cod() != h->at) continue;
      Morphism grade = h->functor->apply(body->grade);
      if (mode.pure && !grade.is_identity()) return std::nullopt;
      return Gen{handle(body->term, h), h->result, grade};
    }
    return std::nullopt;
  }

  std::mt19937_64 rng_;
  std::size_t counter_ = 0;
  std::vector<HandlerPtr> pool_;
  std::vector<TypePtr> types_;
};

}  // namespace

auto generate_wellgraded_terms(const Theory& theory,
                               std::shared_ptr<const GradedSignature> sig,
                               const GenerationOptions& options,
                               TypeChecker& checker) -> Corpus {
  Generator gen(theory, options.seed);
  Corpus corpus;
  std::size_t attempts = 0;
  std::size_t budget = options.count * 50 + 100;
  while (corpus.terms.size() < options.count) {
    if (attempts++ >= budget) {
      fail(ErrorKind::GenerationExhausted,
           "produced " + std::to_string(corpus.terms.size()) + " of " +
               std::to_string(options.count) + " terms in " +
               std::to_string(budget) + " attempts");
    }
    std::size_t n = corpus.terms.size();
    bool unit = options.unit_every != 0 &&
                n % options.unit_every == options.unit_every - 1;
    gen.reset_names();
    Object a = gen.random_object(sig->category());
    TypePtr want = unit ? Type::unit() : gen.random_type();
    auto g = gen.comp({}, *sig, a, options.depth, want, Mode{unit, false});
    if (!g || (unit && !g->grade.is_identity())) continue;
    try {
      Judgement j = checker.grade_of_computation(Context(), *sig, g->term);
      if (!type_equal(j.type, g->type) || j.grade != g->grade) {
        ++corpus.discarded;
        continue;
      }
    } catch (const Error&) {
      ++corpus.discarded;
      continue;
    }
    corpus.terms.push_back({g->term, g->type, g->grade});
  }
  return corpus;
}

namespace {

auto excerpt(const CompPtr& m) -> std::string {
  std::string s = to_source(m);
  if (s.size() <= 400) return s;
  return s.substr(0, 397) + "...";
}

void record(ConformanceReport& report, std::string check,
            const std::string& subject, const CompPtr& m,
            std::string message) {
  report.violations.push_back(
      {std::move(check), subject, excerpt(m), std::move(message)});
}

// val_a V, or weaken g {val_a V} id.
auto is_value_form(const CompPtr& m) -> bool {
  if (as<ast::Val>(m) != nullptr) return true;
  const auto* w = as<ast::Weaken>(m);
  return w != nullptr && w->post.is_identity() &&
         as<ast::Val>(w->body) != nullptr;
}

// E[do op(V)] with E made of let and weaken frames.
auto is_op_form(const CompPtr& m) -> bool {
  if (as<ast::OpCall>(m) != nullptr) return true;
  if (const auto* l = as<ast::Let>(m)) return is_op_form(l->bound);
  if (const auto* w = as<ast::Weaken>(m)) return is_op_form(w->body);
  return false;
}

void check_factorization(const CompPtr& m, const GradedSignature& sig,
                         TypeChecker& checker, const Morphism& grade,
                         const std::string& subject,
                         ConformanceReport& report) {
  Decomposition d = decompose(m);
  for (const auto& f : d.frames) {
    if (f.kind == Frame::Kind::Weaken && !f.pre.is_identity()) return;
  }
  const auto* call = as<ast::OpCall>(d.focus);
  const OpDecl& op = sig.op(call->op);
  ++report.factorization.checked;
  std::string y = "y";
  Object c = op.grade.cod();
  CompPtr rest = plug(retarget(d.frames, c), val(c, var(y)));
  Morphism k =
      checker.grade_of_computation(Context().extend(y, op.arity), sig, rest)
          .grade;
  Morphism composed = sig.category().compose(op.grade, k);
  if (composed != grade) {
    record(report, "factorization", subject, m,
           "operation grade " + op.grade.to_string() + " then context grade " +
               k.to_string() + " gives " + composed.to_string() +
               ", term has grade " + grade.to_string());
    return;
  }
  ++report.factorization.passed;
}

}  // namespace

void check_metatheory(const CompPtr& m,
                      std::shared_ptr<const GradedSignature> sig,
                      TypeChecker& checker, std::size_t max_steps,
                      const std::string& subject, ConformanceReport& report) {
  Evaluator ev(sig, checker);
  Judgement start = checker.grade_of_computation(Context(), *sig, m);
  ++report.progress.checked;
  ++report.preservation.checked;
  Trace trace;
  try {
    trace = ev.run(m, max_steps);
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::Stuck:
        ++report.preservation.passed;
        record(report, "progress", subject, m, e.what());
        break;
      case ErrorKind::MaxStepsExceeded:
        ++report.progress.passed;
        ++report.preservation.passed;
        record(report, "termination", subject, m, e.what());
        break;
      default:
        ++report.progress.passed;
        record(report, "preservation", subject, m,
               std::string(error_kind_name(e.kind())) + ": " + e.what());
        break;
    }
    return;
  }
  ++report.progress.passed;
  ++report.preservation.passed;
  report.steps += trace.steps();

  ++report.safety.checked;
  const CompPtr& last = trace.final_term();
  bool value = trace.outcome == Decomposition::Shape::Value;
  bool safe = value ? is_value_form(last) : is_op_form(last);
  if (value && as<ast::Val>(last) != nullptr && !start.grade.is_identity()) {
    safe = false;
  }
  if (!safe) {
    record(report, "safety", subject, m,
           "terminal configuration '" + excerpt(last) +
               "' is neither a value nor an operation call in context");
    return;
  }
  ++report.safety.passed;
  if (value) return;
  try {
    check_factorization(last, *sig, checker, start.grade, subject, report);
  } catch (const Error& e) {
    record(report, "factorization", subject, m, e.what());
  }
}

auto ConformanceReport::to_json() const -> std::string {
  auto count = [](const CheckCount& c) {
    return nlohmann::json{{"checked", c.checked}, {"passed", c.passed}};
  };
  nlohmann::json out;
  out["programs"] = programs;
  out["generated"] = generated;
  out["discarded"] = discarded;
  out["steps"] = steps;
  out["progress"] = count(progress);
  out["preservation"] = count(preservation);
  out["safety"] = count(safety);
  out["factorization"] = count(factorization);
  out["soundness"] = count(soundness);
  out["adequacy"] = count(adequacy);
  auto violations_json = nlohmann::json::array();
  for (const auto& v : violations) {
    violations_json.push_back({{"check", v.check},
                               {"subject", v.subject},
                               {"term", v.term},
                               {"message", v.message}});
  }
  out["violations"] = violations_json;
  out["ok"] = ok();
  return out.dump(2);
}

auto ConformanceReport::summary() const -> std::string {
  std::ostringstream out;
  auto line = [&](const char* name, const CheckCount& c) {
    out << "  " << name << ": " << c.passed << "/" << c.checked << "\n";
  };
  out << "programs: " << programs << ", generated: " << generated
      << " (discarded " << discarded << "), steps: " << steps << "\n";
  line("progress", progress);
  line("preservation", preservation);
  line("safety", safety);
  line("factorization", factorization);
  line("soundness", soundness);
  line("adequacy", adequacy);
  for (const auto& v : violations) {
    out << "violation [" << v.check << "] " << v.subject << ": " << v.message
        << "\n    " << v.term << "\n";
  }
  out << (ok() ? "ok" : "FAILED") << "\n";
  return out.str();
}

namespace {

void check_semantics(const CompPtr& m,
                     const std::shared_ptr<const GradedSignature>& sig,
                     TypeChecker& checker, std::size_t max_steps,
                     const Judgement& j, const std::string& subject,
                     ConformanceReport& report) {
  if (j.type->is_primitive()) {
    ++report.soundness.checked;
    try {
      SoundnessReport s =
          verify_soundness_along_trace(m, sig, checker, max_steps);
      if (s.ok) {
        ++report.soundness.passed;
      } else {
        record(report, "soundness", subject, m,
               "denotation changed at step " + std::to_string(*s.divergence) +
                   " (" + s.rule + "): " + s.before + " became " + s.after);
      }
    } catch (const Error& e) {
      record(report, "soundness", subject, m, e.what());
    }
  }
  if (j.type->kind() == Type::Kind::Unit && j.grade.is_identity()) {
    AdequacyReport a = verify_adequacy(m, sig, checker, max_steps);
    if (a.applicable) {
      ++report.adequacy.checked;
      if (a.ok) {
        ++report.adequacy.passed;
      } else {
        record(report, "adequacy", subject, m, a.message);
      }
    }
  }
}

}  // namespace

auto run_conformance(const Theory& theory, const ConformanceOptions& options)
    -> ConformanceReport {
  ConformanceReport report;
  TypeChecker checker;
  for (const auto& p : theory.programs) {
    ++report.programs;
    std::string subject = "program " + p.name;
    Judgement j;
    try {
      j = checker.check_program(p);
    } catch (const Error& e) {
      record(report, "typecheck", subject, p.body, e.what());
      continue;
    }
    check_metatheory(p.body, p.signature, checker, options.max_steps, subject,
                     report);
    check_semantics(p.body, p.signature, checker, options.max_steps, j,
                    subject, report);
  }

  std::shared_ptr<const GradedSignature> sig;
  if (!options.signature.empty()) {
    sig = theory.signature(options.signature);
    if (!sig) {
      fail(ErrorKind::UnboundName,
           "no signature named '" + options.signature + "'");
    }
  } else if (!theory.programs.empty()) {
    sig = theory.programs.front().signature;
  } else if (!theory.signatures.empty()) {
    sig = theory.signatures.front();
  }
  if (!sig || options.generation.count == 0) return report;

  Corpus corpus =
      generate_wellgraded_terms(theory, sig, options.generation, checker);
  report.generated = corpus.terms.size();
  report.discarded = corpus.discarded;
  for (std::size_t i = 0; i < corpus.terms.size(); ++i) {
    const GeneratedTerm& t = corpus.terms[i];
    std::string subject = "generated #" + std::to_string(i);
    check_metatheory(t.term, sig, checker, options.max_steps, subject, report);
    check_semantics(t.term, sig, checker, options.max_steps,
                    {t.type, t.grade}, subject, report);
  }
  return report;
}

}  // namespace cateff
