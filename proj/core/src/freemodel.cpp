// Part of the CatEff project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "cateff/freemodel.hpp"

#include <json.hpp>
#include <set>
#include <sstream>

namespace cateff {

auto leaf(Object a, SemValue x) -> TreePtr {
  auto t = std::make_shared<TermTree>();
  t->kind = TermTree::Kind::Leaf;
  t->grade = a.category->identity(a);
  t->object = a;
  t->payload = std::move(x);
  return t;
}

auto node(const OpDecl& op, SemValue param, std::vector<TreePtr> children)
    -> TreePtr {
  std::size_t expected = type_size(*op.arity);
  if (children.size() != expected) {
    fail(ErrorKind::TypeMismatch, "operation " + op.name + " expects " +
                                      std::to_string(expected) +
                                      " children, got " +
                                      std::to_string(children.size()));
  }
  const Morphism& k = children.front()->grade;
  for (const auto& c : children) {
    if (c->grade != k) {
      fail(ErrorKind::GradeHeterogeneous,
           "children of " + op.name + " have grades " + k.to_string() +
               " and " + c->grade.to_string());
    }
  }
  auto t = std::make_shared<TermTree>();
  t->kind = TermTree::Kind::Node;
  t->grade = k.category().compose(op.grade, k);
  t->op = op.name;
  t->op_grade = op.grade;
  t->arity = op.arity;
  t->param = std::move(param);
  t->k = k;
  t->children = std::move(children);
  return t;
}

auto coerce(const Morphism& r, TreePtr t) -> TreePtr {
  if (r.is_identity()) {
    if (r.cod() != t->grade.dom()) {
      fail(ErrorKind::NotComposable, "coercion does not fit tree");
    }
    return t;
  }
  if (t->kind == TermTree::Kind::Coerce) {
    return coerce(r.category().compose(r, t->r), t->child);
  }
  auto c = std::make_shared<TermTree>();
  c->kind = TermTree::Kind::Coerce;
  c->grade = r.category().compose(r, t->grade);
  c->r = r;
  c->child = std::move(t);
  return c;
}

namespace {

struct Grafter {
  const LeafMap& phi;
  std::optional<Morphism> image_grade;

  auto run(const TreePtr& t) -> TreePtr {
    switch (t->kind) {
      case TermTree::Kind::Leaf: {
        TreePtr image = phi(t->payload);
        if (image->grade.dom() != t->object) {
          fail(ErrorKind::NotComposable,
               "graft image of grade " + image->grade.to_string() +
                   " does not start at " + t->object.name());
        }
        if (!image_grade) {
          image_grade = image->grade;
        } else if (*image_grade != image->grade) {
          fail(ErrorKind::GradeHeterogeneous,
               "graft images have grades " + image_grade->to_string() +
                   " and " + image->grade.to_string());
        }
        return image;
      }
      case TermTree::Kind::Node: {
        auto out = std::make_shared<TermTree>(*t);
        for (auto& c : out->children) c = run(c);
        out->k = out->children.front()->grade;
        out->grade = out->k.category().compose(out->op_grade, out->k);
        return out;
      }
      case TermTree::Kind::Coerce:
        return coerce(t->r, run(t->child));
    }
    return t;
  }
};

}  // namespace

auto graft(const TreePtr& t, const LeafMap& phi) -> TreePtr {
  Grafter g{phi, std::nullopt};
  return g.run(t);
}

auto tree_equal(const TreePtr& a, const TreePtr& b) -> bool {
  if (a == b) return true;
  if (a->kind != b->kind || a->grade != b->grade) return false;
  switch (a->kind) {
    case TermTree::Kind::Leaf:
      return a->object == b->object && a->payload == b->payload;
    case TermTree::Kind::Node:
      if (a->op != b->op || a->k != b->k || !(a->param == b->param) ||
          a->children.size() != b->children.size()) {
        return false;
      }
      for (std::size_t i = 0; i < a->children.size(); ++i) {
        if (!tree_equal(a->children[i], b->children[i])) return false;
      }
      return true;
    case TermTree::Kind::Coerce:
      return a->r == b->r && tree_equal(a->child, b->child);
  }
  return false;
}

auto tree_size(const TreePtr& t) -> std::size_t {
  switch (t->kind) {
    case TermTree::Kind::Leaf: return 1;
    case TermTree::Kind::Node: {
      std::size_t n = 1;
      for (const auto& c : t->children) n += tree_size(c);
      return n;
    }
    case TermTree::Kind::Coerce: return 1 + tree_size(t->child);
  }
  return 1;
}

auto tree_depth(const TreePtr& t) -> std::size_t {
  switch (t->kind) {
    case TermTree::Kind::Leaf: return 0;
    case TermTree::Kind::Node: {
      std::size_t d = 0;
      for (const auto& c : t->children) d = std::max(d, tree_depth(c));
      return d + 1;
    }
    case TermTree::Kind::Coerce: return tree_depth(t->child);
  }
  return 0;
}

namespace {

auto json_of(const TreePtr& t) -> nlohmann::json {
  switch (t->kind) {
    case TermTree::Kind::Leaf:
      return {{"leaf",
               {{"obj", t->object.name()}, {"val", t->payload.to_string()}}}};
    case TermTree::Kind::Node: {
      auto children = nlohmann::json::array();
      for (const auto& c : t->children) children.push_back(json_of(c));
      return {{"node",
               {{"op", t->op},
                {"param", t->param.to_string()},
                {"k", t->k.to_string()},
                {"children", children}}}};
    }
    case TermTree::Kind::Coerce:
      return {{"coerce", {{"r", t->r.to_string()}, {"child", json_of(t->child)}}}};
  }
  return nullptr;
}

void text_of(const TreePtr& t, std::ostringstream& out, int indent) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  switch (t->kind) {
    case TermTree::Kind::Leaf:
      out << pad << "e(" << t->object.name() << ", " << t->payload.to_string()
          << ")\n";
      return;
    case TermTree::Kind::Node: {
      out << pad << "do " << t->op << "(" << t->param.to_string() << ") @ "
          << t->k.to_string() << "\n";
      auto labels = enumerate_type(*t->arity);
      for (std::size_t i = 0; i < t->children.size(); ++i) {
        out << pad << "  " << labels[i].to_string() << " ->\n";
        text_of(t->children[i], out, indent + 2);
      }
      return;
    }
    case TermTree::Kind::Coerce:
      out << pad << "coerce " << t->r.to_string() << "\n";
      text_of(t->child, out, indent + 1);
      return;
  }
}

}  // namespace

auto to_json(const TreePtr& t) -> std::string { return json_of(t).dump(); }

auto to_text(const TreePtr& t) -> std::string {
  std::ostringstream out;
  text_of(t, out, 0);
  return out.str();
}

void FiniteModel::set_carrier(const Morphism& k, int size) {
  carriers_[k] = size;
}

void FiniteModel::set_interp(const std::string& op, const Morphism& k,
                             OpInterp f) {
  interp_[{op, k}] = std::move(f);
}

void FiniteModel::set_coercion(const Morphism& r, const Morphism& k,
                               CoerceInterp f) {
  coercions_[{r, k}] = std::move(f);
}

auto FiniteModel::has_carrier(const Morphism& k) const -> bool {
  return carriers_.count(k) != 0;
}

auto FiniteModel::carrier(const Morphism& k) const -> int {
  auto it = carriers_.find(k);
  if (it == carriers_.end()) {
    fail(ErrorKind::MissingInterp, "model has no carrier at " + k.to_string());
  }
  return it->second;
}

auto FiniteModel::interp(const std::string& op, const Morphism& k) const
    -> const OpInterp& {
  auto it = interp_.find({op, k});
  if (it == interp_.end()) {
    fail(ErrorKind::MissingInterp,
         "model does not interpret " + op + " at " + k.to_string());
  }
  return it->second;
}

auto FiniteModel::coercion(const Morphism& r, const Morphism& k) const
    -> const CoerceInterp& {
  auto it = coercions_.find({r, k});
  if (it == coercions_.end()) {
    fail(ErrorKind::MissingInterp, "model does not interpret coercion " +
                                       r.to_string() + " at " + k.to_string());
  }
  return it->second;
}

auto FiniteModel::carrier_grades() const -> std::vector<Morphism> {
  std::vector<Morphism> out;
  for (const auto& [k, n] : carriers_) out.push_back(k);
  return out;
}

void FiniteModel::validate() const {
  for (const auto& [k, n] : carriers_) {
    if (&k.category() != &sig_->category() || k.cod() != at_) {
      fail(ErrorKind::EndpointMismatch,
           "carrier grade " + k.to_string() + " does not end at " + at_.name());
    }
  }
  for (const auto& [key, f] : interp_) {
    const auto& [op_name, k] = key;
    const OpDecl& op = sig_->op(op_name);
    if (k.dom() != op.grade.cod() || k.cod() != at_) {
      fail(ErrorKind::EndpointMismatch,
           "interpretation of " + op_name + " at " + k.to_string() +
               " has the wrong endpoints");
    }
    carrier(k);
    carrier(k.category().compose(op.grade, k));
  }
}

auto interpret_term(const TermTree& t, const FiniteModel& model,
                    const Morphism& k, const Assignment& env) -> int {
  switch (t.kind) {
    case TermTree::Kind::Leaf: {
      int v = env(t.payload);
      if (v < 0 || v >= model.carrier(k)) {
        fail(ErrorKind::MissingInterp, "assignment leaves the carrier at " +
                                           k.to_string());
      }
      return v;
    }
    case TermTree::Kind::Node: {
      Morphism inner = k.category().compose(t.k, k);
      std::vector<int> args;
      args.reserve(t.children.size());
      for (const auto& c : t.children) {
        args.push_back(interpret_term(*c, model, k, env));
      }
      int v = model.interp(t.op, inner)(t.param, args);
      if (v < 0 || v >= model.carrier(k.category().compose(t.grade, k))) {
        fail(ErrorKind::MissingInterp,
             "interpretation of " + t.op + " leaves its carrier");
      }
      return v;
    }
    case TermTree::Kind::Coerce: {
      Morphism inner = k.category().compose(t.child->grade, k);
      int v = interpret_term(*t.child, model, k, env);
      return model.coercion(t.r, inner)(v);
    }
  }
  return 0;
}

namespace {

auto extend(const TreePtr& t, const Assignment& phi, const FiniteModel& model)
    -> int {
  switch (t->kind) {
    case TermTree::Kind::Leaf:
      if (t->object != model.at()) {
        fail(ErrorKind::EndpointMismatch, "leaf at " + t->object.name() +
                                              ", model at " +
                                              model.at().name());
      }
      return phi(t->payload);
    case TermTree::Kind::Node: {
      std::vector<int> args;
      args.reserve(t->children.size());
      for (const auto& c : t->children) args.push_back(extend(c, phi, model));
      return model.interp(t->op, t->k)(t->param, args);
    }
    case TermTree::Kind::Coerce:
      return model.coercion(t->r, t->child->grade)(
          extend(t->child, phi, model));
  }
  return 0;
}

}  // namespace

auto free_extension(Assignment phi, const FiniteModel& model)
    -> std::function<int(const TreePtr&)> {
  return [phi = std::move(phi), &model](const TreePtr& t) {
    return extend(t, phi, model);
  };
}

namespace {

void collect_payloads(const TermTree& t, std::set<SemValue>& out) {
  switch (t.kind) {
    case TermTree::Kind::Leaf: out.insert(t.payload); return;
    case TermTree::Kind::Node:
      for (const auto& c : t.children) collect_payloads(*c, out);
      return;
    case TermTree::Kind::Coerce: collect_payloads(*t.child, out); return;
  }
}

}  // namespace

auto check_equations(const std::vector<Equation>& equations,
                     const FiniteModel& model)
    -> std::vector<EquationViolation> {
  std::vector<EquationViolation> out;
  for (std::size_t e = 0; e < equations.size(); ++e) {
    const auto& eq = equations[e];
    if (eq.lhs->grade != eq.rhs->grade) {
      fail(ErrorKind::GradeMismatchInEquation,
           "equation " + std::to_string(e) + " relates grades " +
               eq.lhs->grade.to_string() + " and " + eq.rhs->grade.to_string());
    }
    std::set<SemValue> vars_set;
    collect_payloads(*eq.lhs, vars_set);
    collect_payloads(*eq.rhs, vars_set);
    std::vector<SemValue> vars(vars_set.begin(), vars_set.end());
    Object b = eq.lhs->grade.cod();
    for (const auto& k : model.carrier_grades()) {
      if (k.dom() != b) continue;
      int n = model.carrier(k);
      std::vector<int> assignment(vars.size(), 0);
      while (true) {
        auto env = [&](const SemValue& x) {
          for (std::size_t i = 0; i < vars.size(); ++i) {
            if (vars[i] == x) return assignment[i];
          }
          return 0;
        };
        try {
          int l = interpret_term(*eq.lhs, model, k, env);
          int r = interpret_term(*eq.rhs, model, k, env);
          if (l != r) {
            EquationViolation v{e, k, {}, l, r};
            for (std::size_t i = 0; i < vars.size(); ++i) {
              v.env.push_back({vars[i], assignment[i]});
            }
            out.push_back(std::move(v));
          }
        } catch (const Error& err) {
          if (err.kind() != ErrorKind::MissingInterp) throw;
          break;
        }
        std::size_t i = 0;
        while (i < assignment.size() && ++assignment[i] == n) {
          assignment[i++] = 0;
        }
        if (i == assignment.size()) break;
      }
    }
  }
  return out;
}

}  // namespace cateff
