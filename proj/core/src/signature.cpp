// Part of the CatEff project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "cateff/signature.hpp"

namespace cateff {

auto Type::unit() -> TypePtr {
  static const TypePtr one =
      std::make_shared<const Type>(Kind::Unit, nullptr, nullptr, Morphism());
  return one;
}

auto Type::prod(TypePtr a, TypePtr b) -> TypePtr {
  return std::make_shared<const Type>(Kind::Prod, std::move(a), std::move(b),
                                      Morphism());
}

auto Type::sum(TypePtr a, TypePtr b) -> TypePtr {
  return std::make_shared<const Type>(Kind::Sum, std::move(a), std::move(b),
                                      Morphism());
}

auto Type::arrow(TypePtr a, TypePtr b, Morphism grade) -> TypePtr {
  return std::make_shared<const Type>(Kind::Arrow, std::move(a), std::move(b),
                                      std::move(grade));
}

auto Type::is_primitive() const -> bool {
  switch (kind_) {
    case Kind::Unit: return true;
    case Kind::Prod:
    case Kind::Sum: return left_->is_primitive() && right_->is_primitive();
    case Kind::Arrow: return false;
  }
  return false;
}

namespace {

auto precedence(Type::Kind k) -> int {
  switch (k) {
    case Type::Kind::Arrow: return 0;
    case Type::Kind::Sum: return 1;
    case Type::Kind::Prod: return 2;
    case Type::Kind::Unit: return 3;
  }
  return 3;
}

auto print_type(const Type& t, int context, bool source) -> std::string {
  std::string out;
  switch (t.kind()) {
    case Type::Kind::Unit: return "1";
    case Type::Kind::Prod:
      out = print_type(*t.left(), 2, source) + " * " +
            print_type(*t.right(), 3, source);
      break;
    case Type::Kind::Sum:
      out = print_type(*t.left(), 1, source) + " + " +
            print_type(*t.right(), 2, source);
      break;
    case Type::Kind::Arrow:
      out = print_type(*t.left(), 1, source) + " -> " +
            print_type(*t.right(), 0, source) + " @ " +
            (source ? t.grade().to_source() : t.grade().to_string());
      break;
  }
  if (precedence(t.kind()) < context) return "(" + out + ")";
  return out;
}

}  // namespace

auto Type::to_string() const -> std::string {
  return print_type(*this, 0, false);
}

auto Type::to_source() const -> std::string {
  return print_type(*this, 0, true);
}

auto operator==(const Type& a, const Type& b) -> bool {
  if (&a == &b) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Type::Kind::Unit: return true;
    case Type::Kind::Prod:
    case Type::Kind::Sum:
      return *a.left() == *b.left() && *a.right() == *b.right();
    case Type::Kind::Arrow:
      return a.grade() == b.grade() && *a.left() == *b.left() &&
             *a.right() == *b.right();
  }
  return false;
}

auto type_equal(const TypePtr& a, const TypePtr& b) -> bool {
  return *a == *b;
}

auto SemValue::star() -> SemValue { return SemValue(); }

auto SemValue::pair(SemValue a, SemValue b) -> SemValue {
  SemValue v;
  v.kind_ = Kind::Pair;
  v.a_ = std::make_shared<const SemValue>(std::move(a));
  v.b_ = std::make_shared<const SemValue>(std::move(b));
  return v;
}

auto SemValue::inl(SemValue a) -> SemValue {
  SemValue v;
  v.kind_ = Kind::Inl;
  v.a_ = std::make_shared<const SemValue>(std::move(a));
  return v;
}

auto SemValue::inr(SemValue a) -> SemValue {
  SemValue v;
  v.kind_ = Kind::Inr;
  v.a_ = std::make_shared<const SemValue>(std::move(a));
  return v;
}

auto SemValue::fun(Fn fn) -> SemValue {
  SemValue v;
  v.kind_ = Kind::Fun;
  v.fn_ = std::make_shared<const Fn>(std::move(fn));
  return v;
}

auto SemValue::apply(const SemValue& arg) const -> TreePtr {
  if (kind_ != Kind::Fun) fail(ErrorKind::TypeMismatch, "not a function");
  return (*fn_)(arg);
}

auto SemValue::is_comparable() const -> bool {
  switch (kind_) {
    case Kind::Star: return true;
    case Kind::Pair: return a_->is_comparable() && b_->is_comparable();
    case Kind::Inl:
    case Kind::Inr: return a_->is_comparable();
    case Kind::Fun: return false;
  }
  return false;
}

auto SemValue::to_string() const -> std::string {
  auto atom = [](const SemValue& v) {
    if (v.kind_ == Kind::Inl || v.kind_ == Kind::Inr) {
      return "(" + v.to_string() + ")";
    }
    return v.to_string();
  };
  switch (kind_) {
    case Kind::Star: return "()";
    case Kind::Pair: return "(" + a_->to_string() + ", " + b_->to_string() + ")";
    case Kind::Inl: return "inl " + atom(*a_);
    case Kind::Inr: return "inr " + atom(*a_);
    case Kind::Fun: return "<fun>";
  }
  return "?";
}

auto operator<=>(const SemValue& a, const SemValue& b)
    -> std::strong_ordering {
  using Kind = SemValue::Kind;
  if (a.kind_ == Kind::Fun || b.kind_ == Kind::Fun) {
    fail(ErrorKind::NonComparable, "function values cannot be compared");
  }
  if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
  switch (a.kind_) {
    case Kind::Star: return std::strong_ordering::equal;
    case Kind::Pair: {
      auto c = *a.a_ <=> *b.a_;
      if (c != 0) return c;
      return *a.b_ <=> *b.b_;
    }
    case Kind::Inl:
    case Kind::Inr: return *a.a_ <=> *b.a_;
    case Kind::Fun: break;
  }
  return std::strong_ordering::equal;
}

auto operator==(const SemValue& a, const SemValue& b) -> bool {
  return (a <=> b) == 0;
}

auto GradedSignature::find(const std::string& op) const -> const OpDecl* {
  auto it = index_.find(op);
  if (it == index_.end()) return nullptr;
  return &ops_[it->second];
}

auto GradedSignature::op(const std::string& op) const -> const OpDecl& {
  const OpDecl* d = find(op);
  if (d == nullptr) {
    fail(ErrorKind::UnboundName,
         "operation '" + op + "' is not in signature " + name_);
  }
  return *d;
}

auto build_signature(std::string name,
                     std::shared_ptr<const GradingCategory> category,
                     std::vector<OpDecl> ops)
    -> std::shared_ptr<const GradedSignature> {
  auto sig = std::shared_ptr<GradedSignature>(new GradedSignature());
  sig->name_ = std::move(name);
  sig->category_ = std::move(category);
  for (auto& op : ops) {
    if (sig->index_.count(op.name) != 0) {
      fail(ErrorKind::DuplicateOp, "operation '" + op.name +
                                       "' declared twice in " + sig->name_);
    }
    if (!op.param->is_primitive() || !op.arity->is_primitive()) {
      fail(ErrorKind::NonPrimitiveType,
           "operation '" + op.name + "' must have primitive parameter and "
           "arity types");
    }
    if (!op.grade.valid() || &op.grade.category() != sig->category_.get()) {
      fail(ErrorKind::UnknownMorphism, "grade of operation '" + op.name +
                                           "' is not a morphism of " +
                                           sig->category_->name());
    }
    sig->index_[op.name] = sig->ops_.size();
    sig->ops_.push_back(std::move(op));
  }
  return sig;
}

auto enumerate_type(const Type& type) -> std::vector<SemValue> {
  switch (type.kind()) {
    case Type::Kind::Unit: return {SemValue::star()};
    case Type::Kind::Prod: {
      auto xs = enumerate_type(*type.left());
      auto ys = enumerate_type(*type.right());
      std::vector<SemValue> out;
      out.reserve(xs.size() * ys.size());
      for (const auto& x : xs) {
        for (const auto& y : ys) out.push_back(SemValue::pair(x, y));
      }
      return out;
    }
    case Type::Kind::Sum: {
      std::vector<SemValue> out;
      for (const auto& x : enumerate_type(*type.left())) {
        out.push_back(SemValue::inl(x));
      }
      for (const auto& y : enumerate_type(*type.right())) {
        out.push_back(SemValue::inr(y));
      }
      return out;
    }
    case Type::Kind::Arrow: break;
  }
  fail(ErrorKind::NonPrimitiveType,
       "cannot enumerate " + type.to_string());
}

auto type_size(const Type& type) -> std::size_t {
  switch (type.kind()) {
    case Type::Kind::Unit: return 1;
    case Type::Kind::Prod:
      return type_size(*type.left()) * type_size(*type.right());
    case Type::Kind::Sum:
      return type_size(*type.left()) + type_size(*type.right());
    case Type::Kind::Arrow: break;
  }
  fail(ErrorKind::NonPrimitiveType, "no finite size for " + type.to_string());
}

auto index_of(const Type& type, const SemValue& value) -> std::size_t {
  using Kind = SemValue::Kind;
  switch (type.kind()) {
    case Type::Kind::Unit:
      if (value.kind() == Kind::Star) return 0;
      break;
    case Type::Kind::Prod:
      if (value.kind() == Kind::Pair) {
        return index_of(*type.left(), value.first()) *
                   type_size(*type.right()) +
               index_of(*type.right(), value.second());
      }
      break;
    case Type::Kind::Sum:
      if (value.kind() == Kind::Inl) {
        return index_of(*type.left(), value.payload());
      }
      if (value.kind() == Kind::Inr) {
        return type_size(*type.left()) +
               index_of(*type.right(), value.payload());
      }
      break;
    case Type::Kind::Arrow:
      fail(ErrorKind::NonPrimitiveType,
           "cannot index " + type.to_string());
  }
  fail(ErrorKind::TypeMismatch,
       value.to_string() + " is not an element of " + type.to_string());
}

}  // namespace cateff
