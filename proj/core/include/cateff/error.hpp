// Part of the CatEff project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#ifndef CATEFF_ERROR_HPP
#define CATEFF_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace cateff {

enum class ErrorKind {
  // Grading categories and functors.
  EndpointMismatch,
  NonTerminatingRules,
  NonConfluentRules,
  NotComposable,
  UnknownGenerator,
  UnknownObject,
  InvalidFunctor,
  DuplicateName,
  // Signatures.
  NonPrimitiveType,
  DuplicateOp,
  UnknownMorphism,
  // Surface syntax.
  SyntaxError,
  UnboundName,
  // Typing.
  UnboundVariable,
  TypeMismatch,
  GradeMismatch,
  ObjectMismatch,
  SignatureMismatch,
  NotInWideSubcategory,
  ClauseGradeMismatch,
  ReturnClauseGradeNotIdentity,
  NonPrimitiveHandledType,
  NonPrimitiveCapturedVariable,
  MissingClause,
  // Term trees and models.
  GradeHeterogeneous,
  MissingInterp,
  GradeMismatchInEquation,
  NonComparable,
  // Evaluation.
  Stuck,
  MaxStepsExceeded,
  // Conformance.
  GenerationExhausted,
};

auto error_kind_name(ErrorKind kind) -> std::string_view;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  auto kind() const -> ErrorKind { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace cateff

#endif  // CATEFF_ERROR_HPP
