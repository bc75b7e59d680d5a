// Part of the CatEff project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "cateff/eval.hpp"

namespace cateff {

namespace {

auto is_coerced(const CompPtr& m) -> bool {
  const auto* w = as<ast::Weaken>(m);
  return w != nullptr && !w->pre.is_identity();
}

// Splits m as E[do op(V)] with E built from let frames and weaken id {[]} h
// frames.
auto op_shape(const CompPtr& m, std::vector<Frame>& frames) -> bool {
  CompPtr cur = m;
  while (true) {
    if (as<ast::OpCall>(cur) != nullptr) return true;
    if (const auto* l = as<ast::Let>(cur)) {
      frames.push_back({Frame::Kind::Let, l->var, l->body, nullptr, {}, {}});
      cur = l->bound;
      continue;
    }
    if (const auto* w = as<ast::Weaken>(cur)) {
      if (!w->pre.is_identity()) return false;
      frames.push_back(
          {Frame::Kind::Weaken, "", nullptr, nullptr, w->pre, w->post});
      cur = w->body;
      continue;
    }
    return false;
  }
}

auto innermost_op(const CompPtr& m) -> CompPtr {
  CompPtr cur = m;
  while (true) {
    if (const auto* l = as<ast::Let>(cur)) {
      cur = l->bound;
    } else if (const auto* w = as<ast::Weaken>(cur)) {
      cur = w->body;
    } else {
      return cur;
    }
  }
}

[[noreturn]] void stuck(const CompPtr& m) {
  fail(ErrorKind::Stuck, "no rule applies to '" + to_source(m) + "'");
}

}  // namespace

auto decompose(const CompPtr& m) -> Decomposition {
  Decomposition d;
  CompPtr cur = m;
  auto redex = [&](std::string rule) {
    d.shape = Decomposition::Shape::Redex;
    d.focus = cur;
    d.rule = std::move(rule);
    return d;
  };
  while (true) {
    if (as<ast::Val>(cur) != nullptr) {
      d.shape = Decomposition::Shape::Value;
      d.focus = cur;
      return d;
    }
    if (as<ast::OpCall>(cur) != nullptr) {
      d.shape = Decomposition::Shape::OpAtTop;
      d.focus = cur;
      return d;
    }
    if (const auto* l = as<ast::Let>(cur)) {
      if (as<ast::Val>(l->bound) != nullptr) return redex("S-Let");
      if (is_coerced(l->bound)) return redex("S-LetFloat");
      d.frames.push_back({Frame::Kind::Let, l->var, l->body, nullptr, {}, {}});
      cur = l->bound;
      continue;
    }
    if (const auto* h = as<ast::Handle>(cur)) {
      if (as<ast::Val>(h->body) != nullptr) return redex("S-HandleRet");
      if (is_coerced(h->body)) return redex("S-HandleFloat");
      std::vector<Frame> inner;
      if (op_shape(h->body, inner)) return redex("S-HandleOp");
      d.frames.push_back(
          {Frame::Kind::Handle, "", nullptr, h->handler, {}, {}});
      cur = h->body;
      continue;
    }
    if (const auto* w = as<ast::Weaken>(cur)) {
      if (w->pre.is_identity() && w->post.is_identity()) {
        return redex("S-WeakenId");
      }
      if (as<ast::Weaken>(w->body) != nullptr) return redex("S-WeakenNest");
      if (as<ast::Val>(w->body) != nullptr && !w->post.is_identity()) {
        return redex("S-WeakenVal");
      }
      d.frames.push_back(
          {Frame::Kind::Weaken, "", nullptr, nullptr, w->pre, w->post});
      cur = w->body;
      continue;
    }
    if (const auto* a = as<ast::App>(cur)) {
      if (as<ast::Lam>(a->fn) != nullptr) return redex("S-App");
      stuck(cur);
    }
    if (const auto* s = as<ast::Split>(cur)) {
      if (as<ast::Pair>(s->value) != nullptr) return redex("S-Proj");
      stuck(cur);
    }
    if (const auto* c = as<ast::Case>(cur)) {
      if (as<ast::Inl>(c->value) != nullptr) return redex("S-MatchLeft");
      if (as<ast::Inr>(c->value) != nullptr) return redex("S-MatchRight");
      stuck(cur);
    }
    stuck(cur);
  }
}

auto plug(const std::vector<Frame>& frames, CompPtr m) -> CompPtr {
  for (auto it = frames.rbegin(); it != frames.rend(); ++it) {
    switch (it->kind) {
      case Frame::Kind::Let: m = let(it->var, m, it->body); break;
      case Frame::Kind::Handle: m = handle(m, it->handler); break;
      case Frame::Kind::Weaken: m = weaken(it->pre, m, it->post); break;
    }
  }
  return m;
}

auto retarget(std::vector<Frame> frames, Object c) -> std::vector<Frame> {
  for (auto& f : frames) {
    if (f.kind == Frame::Kind::Weaken && f.pre.is_identity()) {
      f.pre = c.category->identity(c);
    }
  }
  return frames;
}

auto Evaluator::continuation_grade(const std::vector<Frame>& inner,
                                   const HandlerDecl& h, const OpDecl& op)
    -> Morphism {
  std::string y = fresh_name("y");
  Object c = op.grade.cod();
  CompPtr rest = plug(retarget(inner, c), val(c, var(y)));
  return checker_->grade_of_computation(Context().extend(y, op.arity),
                                        *h.source, rest)
      .grade;
}

auto Evaluator::contract(const Decomposition& d) -> CompPtr {
  const CompPtr& m = d.focus;
  const std::string& rule = d.rule;
  if (rule == "S-App") {
    const auto* a = as<ast::App>(m);
    const auto* l = as<ast::Lam>(a->fn);
    return substitute(l->body, {{l->var, a->arg}});
  }
  if (rule == "S-Let") {
    const auto* l = as<ast::Let>(m);
    return substitute(l->body, {{l->var, as<ast::Val>(l->bound)->value}});
  }
  if (rule == "S-Proj") {
    const auto* s = as<ast::Split>(m);
    const auto* p = as<ast::Pair>(s->value);
    if (s->first == s->second) {
      return substitute(s->body, {{s->second, p->second}});
    }
    return substitute(s->body, {{s->first, p->first}, {s->second, p->second}});
  }
  if (rule == "S-MatchLeft") {
    const auto* c = as<ast::Case>(m);
    return substitute(c->left, {{c->left_var, as<ast::Inl>(c->value)->value}});
  }
  if (rule == "S-MatchRight") {
    const auto* c = as<ast::Case>(m);
    return substitute(c->right,
                      {{c->right_var, as<ast::Inr>(c->value)->value}});
  }
  if (rule == "S-HandleRet") {
    const auto* h = as<ast::Handle>(m);
    return substitute(h->handler->return_body,
                      {{h->handler->return_var, as<ast::Val>(h->body)->value}});
  }
  if (rule == "S-HandleOp") {
    const auto* h = as<ast::Handle>(m);
    const HandlerDecl& H = *h->handler;
    std::vector<Frame> inner;
    op_shape(h->body, inner);
    const auto* call = as<ast::OpCall>(innermost_op(h->body));
    const OpDecl& op = H.source->op(call->op);
    std::string y = fresh_name("y");
    Object c = op.grade.cod();
    CompPtr rest = plug(retarget(inner, c), val(c, var(y)));
    Morphism k = checker_
                     ->grade_of_computation(Context().extend(y, op.arity),
                                            *H.source, rest)
                     .grade;
    const Clause* clause = H.find_clause(call->op, k);
    if (clause == nullptr) {
      fail(ErrorKind::MissingClause, "handler " + H.name +
                                         " has no clause for " + call->op +
                                         " at continuation grade " +
                                         k.to_string());
    }
    ValuePtr resume =
        lam(H.functor->apply(k), y, op.arity, handle(rest, h->handler));
    if (clause->param == clause->resume) {
      return substitute(clause->body, {{clause->resume, resume}});
    }
    return substitute(clause->body,
                      {{clause->param, call->arg}, {clause->resume, resume}});
  }
  if (rule == "S-WeakenId") return as<ast::Weaken>(m)->body;
  if (rule == "S-WeakenNest") {
    const auto* w = as<ast::Weaken>(m);
    const auto* inner = as<ast::Weaken>(w->body);
    const GradingCategory& cat = w->pre.category();
    return weaken(cat.compose(w->pre, inner->pre), inner->body,
                  cat.compose(inner->post, w->post));
  }
  if (rule == "S-WeakenVal") {
    const auto* w = as<ast::Weaken>(m);
    const GradingCategory& cat = w->pre.category();
    Object b = w->post.cod();
    return weaken(cat.compose(w->pre, w->post),
                  val(b, as<ast::Val>(w->body)->value), cat.identity(b));
  }
  if (rule == "S-LetFloat") {
    const auto* l = as<ast::Let>(m);
    const auto* w = as<ast::Weaken>(l->bound);
    const GradingCategory& cat = w->pre.category();
    const GradedSignature* sig = sig_.get();
    for (const auto& f : d.frames) {
      if (f.kind == Frame::Kind::Handle) sig = f.handler->source.get();
    }
    Judgement j = checker_->grade_of_computation(Context(), *sig, m);
    CompPtr inner = let(l->var,
                        weaken(cat.identity(w->pre.cod()), w->body, w->post),
                        l->body);
    return weaken(w->pre, inner, cat.identity(j.grade.cod()));
  }
  if (rule == "S-HandleFloat") {
    const auto* h = as<ast::Handle>(m);
    const auto* w = as<ast::Weaken>(h->body);
    const HandlerDecl& H = *h->handler;
    const GradingCategory& src = H.source->category();
    CompPtr inner = handle(
        weaken(src.identity(w->pre.cod()), w->body, w->post), h->handler);
    return weaken(H.functor->apply(w->pre), inner,
                  H.target->category().identity(H.functor->apply(H.at)));
  }
  fail(ErrorKind::Stuck, "unknown rule " + rule);
}

auto Evaluator::step(const CompPtr& m) -> std::optional<Step> {
  Decomposition d = decompose(m);
  if (d.shape != Decomposition::Shape::Redex) return std::nullopt;
  return Step{plug(d.frames, contract(d)), d.rule};
}

auto Evaluator::run(const CompPtr& m, std::size_t max_steps, bool check_types)
    -> Trace {
  Trace trace;
  std::optional<Judgement> start;
  if (check_types) start = checker_->grade_of_computation(Context(), *sig_, m);
  trace.configurations.push_back({m, "", start});
  CompPtr cur = m;
  while (true) {
    Decomposition d = decompose(cur);
    if (d.shape != Decomposition::Shape::Redex) {
      trace.outcome = d.shape;
      return trace;
    }
    if (trace.steps() >= max_steps) {
      fail(ErrorKind::MaxStepsExceeded,
           "no terminal configuration within " + std::to_string(max_steps) +
               " steps");
    }
    cur = plug(d.frames, contract(d));
    std::optional<Judgement> j;
    if (check_types) {
      j = checker_->grade_of_computation(Context(), *sig_, cur);
      if (!type_equal(j->type, start->type) || j->grade != start->grade) {
        fail(ErrorKind::TypeMismatch,
             "type not preserved by " + d.rule + ": " + start->type->to_string() +
                 " @ " + start->grade.to_string() + " became " +
                 j->type->to_string() + " @ " + j->grade.to_string());
      }
    }
    trace.configurations.push_back({cur, d.rule, j});
  }
}

}  // namespace cateff
