// Part of the CatEff project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "cateff/syntax.hpp"

#include <atomic>
#include <cctype>

namespace cateff {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

auto mkv(decltype(ValueNode::node) n) -> ValuePtr {
  return std::make_shared<const ValueNode>(ValueNode{std::move(n)});
}

auto mkc(decltype(CompNode::node) n) -> CompPtr {
  return std::make_shared<const CompNode>(CompNode{std::move(n)});
}

}  // namespace

auto var(std::string name) -> ValuePtr { return mkv(ast::Var{std::move(name)}); }
auto star() -> ValuePtr {
  static const ValuePtr s = mkv(ast::Star{});
  return s;
}
auto inl(ValuePtr v, TypePtr t) -> ValuePtr {
  return mkv(ast::Inl{std::move(v), std::move(t)});
}
auto inr(ValuePtr v, TypePtr t) -> ValuePtr {
  return mkv(ast::Inr{std::move(v), std::move(t)});
}
auto pair(ValuePtr a, ValuePtr b) -> ValuePtr {
  return mkv(ast::Pair{std::move(a), std::move(b)});
}
auto lam(Morphism grade, std::string x, TypePtr type, CompPtr body)
    -> ValuePtr {
  return mkv(
      ast::Lam{std::move(grade), std::move(x), std::move(type), std::move(body)});
}
auto val(Object a, ValuePtr v) -> CompPtr { return mkc(ast::Val{a, std::move(v)}); }
auto let(std::string x, CompPtr bound, CompPtr body) -> CompPtr {
  return mkc(ast::Let{std::move(x), std::move(bound), std::move(body)});
}
auto app(ValuePtr fn, ValuePtr arg) -> CompPtr {
  return mkc(ast::App{std::move(fn), std::move(arg)});
}
auto op_call(std::string op, ValuePtr arg) -> CompPtr {
  return mkc(ast::OpCall{std::move(op), std::move(arg)});
}
auto split(ValuePtr v, std::string x, std::string y, CompPtr body) -> CompPtr {
  return mkc(
      ast::Split{std::move(v), std::move(x), std::move(y), std::move(body)});
}
auto case_of(ValuePtr v, std::string x, CompPtr left, std::string y,
             CompPtr right) -> CompPtr {
  return mkc(ast::Case{std::move(v), std::move(x), std::move(left),
                       std::move(y), std::move(right)});
}
auto handle(CompPtr body, HandlerPtr handler) -> CompPtr {
  return mkc(ast::Handle{std::move(body), std::move(handler)});
}
auto weaken(Morphism pre, CompPtr body, Morphism post) -> CompPtr {
  return mkc(ast::Weaken{std::move(pre), std::move(body), std::move(post)});
}

auto HandlerDecl::find_clause(const std::string& op, const Morphism& k) const
    -> const Clause* {
  const Clause* fallback = nullptr;
  for (const auto& c : clauses) {
    if (c.op != op) continue;
    if (c.k && *c.k == k) return &c;
    if (!c.k && fallback == nullptr) fallback = &c;
  }
  return fallback;
}

auto HandlerDecl::has_default(const std::string& op) const -> bool {
  for (const auto& c : clauses) {
    if (c.op == op && !c.k) return true;
  }
  return false;
}

namespace {

template <class T>
auto find_named(const std::vector<std::shared_ptr<const T>>& xs,
                const std::string& name) -> std::shared_ptr<const T> {
  for (const auto& x : xs) {
    if (x->name() == name) return x;
  }
  return nullptr;
}

}  // namespace

auto Theory::category(const std::string& name) const
    -> std::shared_ptr<const GradingCategory> {
  return find_named(categories, name);
}
auto Theory::functor(const std::string& name) const
    -> std::shared_ptr<const GradingFunctor> {
  return find_named(functors, name);
}
auto Theory::signature(const std::string& name) const
    -> std::shared_ptr<const GradedSignature> {
  return find_named(signatures, name);
}
auto Theory::handler(const std::string& name) const -> HandlerPtr {
  for (const auto& h : handlers) {
    if (h->name == name) return h;
  }
  return nullptr;
}
auto Theory::program(const std::string& name) const -> const Program* {
  for (const auto& p : programs) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

auto equal(const ValuePtr& a, const ValuePtr& b) -> bool {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      Overloaded{
          [&](const ast::Var& x) { return x.name == as<ast::Var>(b)->name; },
          [&](const ast::Star&) { return true; },
          [&](const ast::Inl& x) {
            const auto* y = as<ast::Inl>(b);
            return *x.type == *y->type && equal(x.value, y->value);
          },
          [&](const ast::Inr& x) {
            const auto* y = as<ast::Inr>(b);
            return *x.type == *y->type && equal(x.value, y->value);
          },
          [&](const ast::Pair& x) {
            const auto* y = as<ast::Pair>(b);
            return equal(x.first, y->first) && equal(x.second, y->second);
          },
          [&](const ast::Lam& x) {
            const auto* y = as<ast::Lam>(b);
            return x.grade == y->grade && x.var == y->var &&
                   *x.var_type == *y->var_type && equal(x.body, y->body);
          },
      },
      a->node);
}

auto equal(const CompPtr& a, const CompPtr& b) -> bool {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      Overloaded{
          [&](const ast::Val& x) {
            const auto* y = as<ast::Val>(b);
            return x.object == y->object && equal(x.value, y->value);
          },
          [&](const ast::Let& x) {
            const auto* y = as<ast::Let>(b);
            return x.var == y->var && equal(x.bound, y->bound) &&
                   equal(x.body, y->body);
          },
          [&](const ast::App& x) {
            const auto* y = as<ast::App>(b);
            return equal(x.fn, y->fn) && equal(x.arg, y->arg);
          },
          [&](const ast::OpCall& x) {
            const auto* y = as<ast::OpCall>(b);
            return x.op == y->op && equal(x.arg, y->arg);
          },
          [&](const ast::Split& x) {
            const auto* y = as<ast::Split>(b);
            return x.first == y->first && x.second == y->second &&
                   equal(x.value, y->value) && equal(x.body, y->body);
          },
          [&](const ast::Case& x) {
            const auto* y = as<ast::Case>(b);
            return x.left_var == y->left_var && x.right_var == y->right_var &&
                   equal(x.value, y->value) && equal(x.left, y->left) &&
                   equal(x.right, y->right);
          },
          [&](const ast::Handle& x) {
            const auto* y = as<ast::Handle>(b);
            return x.handler->name == y->handler->name &&
                   equal(x.body, y->body);
          },
          [&](const ast::Weaken& x) {
            const auto* y = as<ast::Weaken>(b);
            return x.pre == y->pre && x.post == y->post &&
                   equal(x.body, y->body);
          },
      },
      a->node);
}

namespace {

void collect(const ValuePtr& v, std::set<std::string>& bound,
             std::set<std::string>& out);

void collect_under(const std::string& x, const CompPtr& c,
                   std::set<std::string>& bound, std::set<std::string>& out);

void collect(const CompPtr& c, std::set<std::string>& bound,
             std::set<std::string>& out) {
  std::visit(Overloaded{
                 [&](const ast::Val& x) { collect(x.value, bound, out); },
                 [&](const ast::Let& x) {
                   collect(x.bound, bound, out);
                   collect_under(x.var, x.body, bound, out);
                 },
                 [&](const ast::App& x) {
                   collect(x.fn, bound, out);
                   collect(x.arg, bound, out);
                 },
                 [&](const ast::OpCall& x) { collect(x.arg, bound, out); },
                 [&](const ast::Split& x) {
                   collect(x.value, bound, out);
                   bool had_first = bound.count(x.first) != 0;
                   bound.insert(x.first);
                   collect_under(x.second, x.body, bound, out);
                   if (!had_first) bound.erase(x.first);
                 },
                 [&](const ast::Case& x) {
                   collect(x.value, bound, out);
                   collect_under(x.left_var, x.left, bound, out);
                   collect_under(x.right_var, x.right, bound, out);
                 },
                 [&](const ast::Handle& x) { collect(x.body, bound, out); },
                 [&](const ast::Weaken& x) { collect(x.body, bound, out); },
             },
             c->node);
}

void collect_under(const std::string& x, const CompPtr& c,
                   std::set<std::string>& bound, std::set<std::string>& out) {
  bool had = bound.count(x) != 0;
  bound.insert(x);
  collect(c, bound, out);
  if (!had) bound.erase(x);
}

void collect(const ValuePtr& v, std::set<std::string>& bound,
             std::set<std::string>& out) {
  std::visit(Overloaded{
                 [&](const ast::Var& x) {
                   if (bound.count(x.name) == 0) out.insert(x.name);
                 },
                 [&](const ast::Star&) {},
                 [&](const ast::Inl& x) { collect(x.value, bound, out); },
                 [&](const ast::Inr& x) { collect(x.value, bound, out); },
                 [&](const ast::Pair& x) {
                   collect(x.first, bound, out);
                   collect(x.second, bound, out);
                 },
                 [&](const ast::Lam& x) {
                   collect_under(x.var, x.body, bound, out);
                 },
             },
             v->node);
}

}  // namespace

auto free_vars(const ValuePtr& v) -> std::set<std::string> {
  std::set<std::string> bound;
  std::set<std::string> out;
  collect(v, bound, out);
  return out;
}

auto free_vars(const CompPtr& c) -> std::set<std::string> {
  std::set<std::string> bound;
  std::set<std::string> out;
  collect(c, bound, out);
  return out;
}

namespace {

auto value_has_weaken(const ValuePtr& v) -> bool {
  return std::visit(Overloaded{
                        [](const ast::Var&) { return false; },
                        [](const ast::Star&) { return false; },
                        [](const ast::Inl& x) { return value_has_weaken(x.value); },
                        [](const ast::Inr& x) { return value_has_weaken(x.value); },
                        [](const ast::Pair& x) {
                          return value_has_weaken(x.first) ||
                                 value_has_weaken(x.second);
                        },
                        [](const ast::Lam& x) { return contains_weaken(x.body); },
                    },
                    v->node);
}

auto value_size(const ValuePtr& v) -> std::size_t {
  return std::visit(Overloaded{
                        [](const ast::Var&) -> std::size_t { return 1; },
                        [](const ast::Star&) -> std::size_t { return 1; },
                        [](const ast::Inl& x) { return 1 + value_size(x.value); },
                        [](const ast::Inr& x) { return 1 + value_size(x.value); },
                        [](const ast::Pair& x) {
                          return 1 + value_size(x.first) + value_size(x.second);
                        },
                        [](const ast::Lam& x) { return 1 + size(x.body); },
                    },
                    v->node);
}

}  // namespace

auto contains_weaken(const CompPtr& c) -> bool {
  return std::visit(
      Overloaded{
          [](const ast::Val& x) { return value_has_weaken(x.value); },
          [](const ast::Let& x) {
            return contains_weaken(x.bound) || contains_weaken(x.body);
          },
          [](const ast::App& x) {
            return value_has_weaken(x.fn) || value_has_weaken(x.arg);
          },
          [](const ast::OpCall& x) { return value_has_weaken(x.arg); },
          [](const ast::Split& x) {
            return value_has_weaken(x.value) || contains_weaken(x.body);
          },
          [](const ast::Case& x) {
            return value_has_weaken(x.value) || contains_weaken(x.left) ||
                   contains_weaken(x.right);
          },
          [](const ast::Handle& x) { return contains_weaken(x.body); },
          [](const ast::Weaken&) { return true; },
      },
      c->node);
}

auto size(const CompPtr& c) -> std::size_t {
  return std::visit(
      Overloaded{
          [](const ast::Val& x) { return 1 + value_size(x.value); },
          [](const ast::Let& x) { return 1 + size(x.bound) + size(x.body); },
          [](const ast::App& x) {
            return 1 + value_size(x.fn) + value_size(x.arg);
          },
          [](const ast::OpCall& x) { return 1 + value_size(x.arg); },
          [](const ast::Split& x) {
            return 1 + value_size(x.value) + size(x.body);
          },
          [](const ast::Case& x) {
            return 1 + value_size(x.value) + size(x.left) + size(x.right);
          },
          [](const ast::Handle& x) { return 1 + size(x.body); },
          [](const ast::Weaken& x) { return 1 + size(x.body); },
      },
      c->node);
}

auto fresh_name(std::string_view base) -> std::string {
  static std::atomic<unsigned long> counter{0};
  std::string stem(base);
  auto tick = stem.rfind('\'');
  if (tick != std::string::npos && tick + 1 < stem.size()) {
    bool digits = true;
    for (std::size_t i = tick + 1; i < stem.size(); ++i) {
      digits = digits && std::isdigit(static_cast<unsigned char>(stem[i]));
    }
    if (digits) stem.resize(tick);
  }
  return stem + "'" + std::to_string(++counter);
}

namespace {

struct Substituter {
  const std::set<std::string>& range_fv;

  auto value(const ValuePtr& v, const Bindings& b) -> ValuePtr {
    return std::visit(
        Overloaded{
            [&](const ast::Var& x) -> ValuePtr {
              auto it = b.find(x.name);
              return it == b.end() ? v : it->second;
            },
            [&](const ast::Star&) -> ValuePtr { return v; },
            [&](const ast::Inl& x) -> ValuePtr {
              return inl(value(x.value, b), x.type);
            },
            [&](const ast::Inr& x) -> ValuePtr {
              return inr(value(x.value, b), x.type);
            },
            [&](const ast::Pair& x) -> ValuePtr {
              return pair(value(x.first, b), value(x.second, b));
            },
            [&](const ast::Lam& x) -> ValuePtr {
              auto [name, body] = under(x.var, x.body, b);
              return lam(x.grade, name, x.var_type, body);
            },
        },
        v->node);
  }

  // Substitutes under a binder, renaming it when it would capture.
  auto under(const std::string& x, const CompPtr& body, const Bindings& b)
      -> std::pair<std::string, CompPtr> {
    Bindings inner = b;
    inner.erase(x);
    if (inner.empty()) return {x, body};
    if (range_fv.count(x) == 0) return {x, comp(body, inner)};
    std::string renamed = fresh_name(x);
    inner[x] = var(renamed);
    return {renamed, comp(body, inner)};
  }

  auto comp(const CompPtr& c, const Bindings& b) -> CompPtr {
    return std::visit(
        Overloaded{
            [&](const ast::Val& x) -> CompPtr {
              return val(x.object, value(x.value, b));
            },
            [&](const ast::Let& x) -> CompPtr {
              auto bound = comp(x.bound, b);
              auto [name, body] = under(x.var, x.body, b);
              return let(name, bound, body);
            },
            [&](const ast::App& x) -> CompPtr {
              return app(value(x.fn, b), value(x.arg, b));
            },
            [&](const ast::OpCall& x) -> CompPtr {
              return op_call(x.op, value(x.arg, b));
            },
            [&](const ast::Split& x) -> CompPtr {
              auto v = value(x.value, b);
              Bindings inner = b;
              inner.erase(x.first);
              inner.erase(x.second);
              std::string first = x.first;
              std::string second = x.second;
              if (!inner.empty() && range_fv.count(first) != 0) {
                first = fresh_name(first);
                inner[x.first] = var(first);
              }
              if (!inner.empty() && range_fv.count(second) != 0) {
                second = fresh_name(second);
                inner[x.second] = var(second);
              }
              auto body = inner.empty() ? x.body : comp(x.body, inner);
              return split(v, first, second, body);
            },
            [&](const ast::Case& x) -> CompPtr {
              auto v = value(x.value, b);
              auto [ln, l] = under(x.left_var, x.left, b);
              auto [rn, r] = under(x.right_var, x.right, b);
              return case_of(v, ln, l, rn, r);
            },
            [&](const ast::Handle& x) -> CompPtr {
              return handle(comp(x.body, b), x.handler);
            },
            [&](const ast::Weaken& x) -> CompPtr {
              return weaken(x.pre, comp(x.body, b), x.post);
            },
        },
        c->node);
  }
};

auto range_free_vars(const Bindings& b) -> std::set<std::string> {
  std::set<std::string> out;
  for (const auto& [name, v] : b) {
    auto fv = free_vars(v);
    out.insert(fv.begin(), fv.end());
  }
  return out;
}

}  // namespace

auto substitute(const ValuePtr& v, const Bindings& b) -> ValuePtr {
  if (b.empty()) return v;
  auto fv = range_free_vars(b);
  return Substituter{fv}.value(v, b);
}

auto substitute(const CompPtr& c, const Bindings& b) -> CompPtr {
  if (b.empty()) return c;
  auto fv = range_free_vars(b);
  return Substituter{fv}.comp(c, b);
}

}  // namespace cateff
