// Part of the CatEff project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include <sstream>

#include "cateff/syntax.hpp"

namespace cateff {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

auto print_value(const ValuePtr& v, bool atom) -> std::string;
auto print_comp(const CompPtr& c) -> std::string;

auto parens(const std::string& s, bool wrap) -> std::string {
  return wrap ? "(" + s + ")" : s;
}

auto print_value(const ValuePtr& v, bool atom) -> std::string {
  return std::visit(
      Overloaded{
          [](const ast::Var& x) { return x.name; },
          [](const ast::Star&) { return std::string("()"); },
          [&](const ast::Inl& x) {
            return parens("inl " + print_value(x.value, true) + " : " +
                              x.type->to_source(),
                          atom);
          },
          [&](const ast::Inr& x) {
            return parens("inr " + print_value(x.value, true) + " : " +
                              x.type->to_source(),
                          atom);
          },
          [](const ast::Pair& x) {
            return "(" + print_value(x.first, false) + ", " +
                   print_value(x.second, false) + ")";
          },
          [&](const ast::Lam& x) {
            return parens("fun^" + x.grade.to_source() + " (" + x.var + ":" +
                              x.var_type->to_source() +
                              ") => " + print_comp(x.body),
                          atom);
          },
      },
      v->node);
}

// Branches that end in a greedy construct are bracketed so that a following
// `|` or `in` cannot be read as part of them.
auto print_inner(const CompPtr& c) -> std::string {
  bool simple = as<ast::Val>(c) != nullptr || as<ast::App>(c) != nullptr ||
                as<ast::OpCall>(c) != nullptr || as<ast::Weaken>(c) != nullptr;
  return parens(print_comp(c), !simple);
}

auto print_comp(const CompPtr& c) -> std::string {
  return std::visit(
      Overloaded{
          [](const ast::Val& x) {
            return "val " + x.object.name() + " " + print_value(x.value, true);
          },
          [](const ast::Let& x) {
            return "let " + x.var + " <- " + print_inner(x.bound) + " in " +
                   print_comp(x.body);
          },
          [](const ast::App& x) {
            return print_value(x.fn, true) + " " + print_value(x.arg, true);
          },
          [](const ast::OpCall& x) {
            return "do " + x.op + "(" + print_value(x.arg, false) + ")";
          },
          [](const ast::Split& x) {
            return "split " + print_value(x.value, true) + " as (" + x.first +
                   ", " + x.second + ") in " + print_comp(x.body);
          },
          [](const ast::Case& x) {
            return "case " + print_value(x.value, true) + " of inl " +
                   x.left_var + " => " + print_inner(x.left) + " | inr " +
                   x.right_var + " => " + print_comp(x.right);
          },
          [](const ast::Handle& x) {
            return "handle " + print_comp(x.body) + " with " + x.handler->name;
          },
          [](const ast::Weaken& x) {
            return "weaken " + x.pre.to_source() + " { " + print_comp(x.body) +
                   " } " + x.post.to_source();
          },
      },
      c->node);
}

auto join_names(const std::vector<std::string>& xs) -> std::string {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ".";
    out += xs[i];
  }
  return out;
}

void print_category(std::ostream& out, const GradingCategory& c,
                    const Theory& t) {
  if (!c.completion_of().empty()) {
    out << "category " << c.name() << " = pair_completion("
        << c.completion_of() << ");\n\n";
    return;
  }
  const auto& p = c.presentation();
  out << "category " << c.name() << " {\n  objects ";
  for (std::size_t i = 0; i < p.objects.size(); ++i) {
    out << (i > 0 ? ", " : "") << p.objects[i];
  }
  out << ";\n";
  for (const auto& g : p.generators) {
    out << "  gen " << g.name << " : " << g.dom << " -> " << g.cod << ";\n";
  }
  for (const auto& r : p.rules) {
    out << "  rule " << join_names(r.lhs) << " = ";
    if (r.rhs.generators.empty()) {
      out << (r.rhs.identity ? "id[" + *r.rhs.identity + "]" : "id");
    } else {
      out << join_names(r.rhs.generators);
    }
    out << ";\n";
  }
  if (!p.wide.empty()) {
    out << "  wide ";
    for (std::size_t i = 0; i < p.wide.size(); ++i) {
      out << (i > 0 ? ", " : "") << p.wide[i];
    }
    out << ";\n";
  }
  out << "}\n\n";
  (void)t;
}

void print_functor(std::ostream& out, const GradingFunctor& f) {
  out << "functor " << f.name() << " : " << f.source().name() << " -> "
      << f.target().name() << " {\n";
  for (const auto& o : f.source().objects()) {
    out << "  obj " << o.name() << " => " << f.apply(o).name() << ";\n";
  }
  for (int g = 0; g < f.source().generator_count(); ++g) {
    std::string name = f.source().generator(g).name;
    if (name.rfind("⟨", 0) == 0) {
      name = "<" + name.substr(std::string("⟨").size());
      name.replace(name.size() - std::string("⟩").size(),
                   std::string("⟩").size(), ">");
    }
    out << "  gen " << name << " => " << f.generator_image(g).to_source()
        << ";\n";
  }
  out << "}\n\n";
}

void print_signature(std::ostream& out, const GradedSignature& s) {
  out << "signature " << s.name() << " over " << s.category().name() << " {\n";
  for (const auto& op : s.ops()) {
    out << "  op " << op.name << " : " << op.param->to_source() << " ~> "
        << op.arity->to_source() << " @ " << op.grade.to_source() << ";\n";
  }
  out << "}\n\n";
}

}  // namespace

auto to_source(const ValuePtr& v) -> std::string {
  return print_value(v, false);
}

auto to_source(const CompPtr& c) -> std::string { return print_comp(c); }

auto to_source(const HandlerDecl& h) -> std::string {
  std::ostringstream out;
  out << "handler " << h.name << " over " << h.source->name() << " to "
      << h.target->name() << " via " << h.functor->name() << " at "
      << h.at.name() << " : " << h.handled->to_source() << " => "
      << h.result->to_source() << " {\n";
  out << "  return " << h.return_var << " => " << print_comp(h.return_body)
      << ";\n";
  for (const auto& c : h.clauses) {
    out << "  op " << c.op << "(" << c.param << "), " << c.resume;
    if (c.k) out << " @ " << c.k->to_source();
    out << " => " << print_comp(c.body) << ";\n";
  }
  out << "}\n";
  return out.str();
}

auto to_source(const Program& p) -> std::string {
  return "program " + p.name + " over " + p.signature->name() + " : " +
         p.type->to_source() + " @ " + p.grade.to_source() + " {\n  " +
         print_comp(p.body) + "\n}\n";
}

auto to_source(const Theory& t) -> std::string {
  std::ostringstream out;
  for (const auto& [name, type] : t.type_aliases) {
    out << "type " << name << " = " << type->to_source() << ";\n";
  }
  if (!t.type_aliases.empty()) out << "\n";
  for (const auto& c : t.categories) print_category(out, *c, t);
  for (const auto& f : t.functors) print_functor(out, *f);
  for (const auto& s : t.signatures) print_signature(out, *s);
  for (const auto& h : t.handlers) out << to_source(*h) << "\n";
  for (const auto& p : t.programs) out << to_source(p) << "\n";
  return out.str();
}

}  // namespace cateff
