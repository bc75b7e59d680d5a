// Part of the CatEff project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "cateff/denote.hpp"

namespace cateff {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

auto extend(const Env& env, const std::string& x, SemValue v) -> Env {
  Env out = env;
  out.insert_or_assign(x, std::move(v));
  return out;
}

}  // namespace

auto Domain::to_string() const -> std::string {
  if (!finite) {
    return "functions from [[" + type->left()->to_string() +
           "]] into trees of grade " + type->grade().to_string();
  }
  std::string out = "{";
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (i != 0) out += ", ";
    out += elements[i].to_string();
  }
  return out + "}";
}

auto denote_type(const TypePtr& type) -> Domain {
  if (type->is_primitive()) return {type, true, enumerate_type(*type)};
  return {type, false, {}};
}

auto denote_value(const Env& env, const GradedSignature& sig,
                  const ValuePtr& v) -> SemValue {
  return std::visit(
      Overloaded{
          [&](const ast::Var& x) -> SemValue {
            auto it = env.find(x.name);
            if (it == env.end()) {
              fail(ErrorKind::UnboundVariable,
                   "no value for '" + x.name + "'");
            }
            return it->second;
          },
          [&](const ast::Star&) { return SemValue::star(); },
          [&](const ast::Inl& x) {
            return SemValue::inl(denote_value(env, sig, x.value));
          },
          [&](const ast::Inr& x) {
            return SemValue::inr(denote_value(env, sig, x.value));
          },
          [&](const ast::Pair& x) {
            return SemValue::pair(denote_value(env, sig, x.first),
                                  denote_value(env, sig, x.second));
          },
          [&](const ast::Lam& x) {
            const GradedSignature* s = &sig;
            return SemValue::fun(
                [env, s, var = x.var, body = x.body](const SemValue& w) {
                  return denote_computation(extend(env, var, w), *s, body);
                });
          },
      },
      v->node);
}

auto denote_computation(const Env& env, const GradedSignature& sig,
                        const CompPtr& m) -> TreePtr {
  return std::visit(
      Overloaded{
          [&](const ast::Val& x) {
            return leaf(x.object, denote_value(env, sig, x.value));
          },
          [&](const ast::Let& x) {
            TreePtr t = denote_computation(env, sig, x.bound);
            return graft(t, [&](const SemValue& w) {
              return denote_computation(extend(env, x.var, w), sig, x.body);
            });
          },
          [&](const ast::App& x) {
            return denote_value(env, sig, x.fn)
                .apply(denote_value(env, sig, x.arg));
          },
          [&](const ast::OpCall& x) {
            const OpDecl& op = sig.op(x.op);
            Object c = op.grade.cod();
            std::vector<TreePtr> children;
            for (auto& w : enumerate_type(*op.arity)) {
              children.push_back(leaf(c, std::move(w)));
            }
            return node(op, denote_value(env, sig, x.arg),
                        std::move(children));
          },
          [&](const ast::Split& x) {
            SemValue p = denote_value(env, sig, x.value);
            Env inner = extend(env, x.first, p.first());
            return denote_computation(extend(inner, x.second, p.second()), sig,
                                      x.body);
          },
          [&](const ast::Case& x) {
            SemValue s = denote_value(env, sig, x.value);
            if (s.kind() == SemValue::Kind::Inl) {
              return denote_computation(extend(env, x.left_var, s.payload()),
                                        sig, x.left);
            }
            return denote_computation(extend(env, x.right_var, s.payload()),
                                      sig, x.right);
          },
          [&](const ast::Handle& x) {
            TreePtr t = denote_computation(env, *x.handler->source, x.body);
            return fold_handler(*x.handler, t);
          },
          [&](const ast::Weaken& x) {
            TreePtr t = denote_computation(env, sig, x.body);
            Object b = x.post.cod();
            const Morphism& h = x.post;
            return coerce(x.pre, graft(t, [&](const SemValue& w) {
                            return coerce(h, leaf(b, w));
                          }));
          },
      },
      m->node);
}

auto fold_handler(const HandlerDecl& h, const TreePtr& t, const LeafMap* ret)
    -> TreePtr {
  switch (t->kind) {
    case TermTree::Kind::Leaf:
      if (ret != nullptr) return (*ret)(t->payload);
      return denote_computation(Env{{h.return_var, t->payload}}, *h.target,
                                h.return_body);
    case TermTree::Kind::Node: {
      const Clause* clause = h.find_clause(t->op, t->k);
      if (clause == nullptr) {
        fail(ErrorKind::MissingClause, "handler " + h.name +
                                           " has no clause for " + t->op +
                                           " at continuation grade " +
                                           t->k.to_string());
      }
      SemValue resume = SemValue::fun(
          [&h, t, ret](const SemValue& w) {
            return fold_handler(h, t->children[index_of(*t->arity, w)], ret);
          });
      Env env{{clause->param, t->param}};
      env.insert_or_assign(clause->resume, resume);
      return denote_computation(env, *h.target, clause->body);
    }
    case TermTree::Kind::Coerce:
      return coerce(h.functor->apply(t->r), fold_handler(h, t->child, ret));
  }
  return t;
}

auto denote_handler(const HandlerDecl& h)
    -> std::function<TreePtr(const TreePtr&)> {
  return [&h](const TreePtr& t) { return fold_handler(h, t); };
}

}  // namespace cateff
