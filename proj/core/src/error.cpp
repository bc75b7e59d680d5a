// Part of the CatEff project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "cateff/error.hpp"

namespace cateff {

auto error_kind_name(ErrorKind kind) -> std::string_view {
  switch (kind) {
    case ErrorKind::EndpointMismatch: return "EndpointMismatch";
    case ErrorKind::NonTerminatingRules: return "NonTerminatingRules";
    case ErrorKind::NonConfluentRules: return "NonConfluentRules";
    case ErrorKind::NotComposable: return "NotComposable";
    case ErrorKind::UnknownGenerator: return "UnknownGenerator";
    case ErrorKind::UnknownObject: return "UnknownObject";
    case ErrorKind::InvalidFunctor: return "InvalidFunctor";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::NonPrimitiveType: return "NonPrimitiveType";
    case ErrorKind::DuplicateOp: return "DuplicateOp";
    case ErrorKind::UnknownMorphism: return "UnknownMorphism";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnboundName: return "UnboundName";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::GradeMismatch: return "GradeMismatch";
    case ErrorKind::ObjectMismatch: return "ObjectMismatch";
    case ErrorKind::SignatureMismatch: return "SignatureMismatch";
    case ErrorKind::NotInWideSubcategory: return "NotInWideSubcategory";
    case ErrorKind::ClauseGradeMismatch: return "ClauseGradeMismatch";
    case ErrorKind::ReturnClauseGradeNotIdentity:
      return "ReturnClauseGradeNotIdentity";
    case ErrorKind::NonPrimitiveHandledType: return "NonPrimitiveHandledType";
    case ErrorKind::NonPrimitiveCapturedVariable:
      return "NonPrimitiveCapturedVariable";
    case ErrorKind::MissingClause: return "MissingClause";
    case ErrorKind::GradeHeterogeneous: return "GradeHeterogeneous";
    case ErrorKind::MissingInterp: return "MissingInterp";
    case ErrorKind::GradeMismatchInEquation: return "GradeMismatchInEquation";
    case ErrorKind::NonComparable: return "NonComparable";
    case ErrorKind::Stuck: return "Stuck";
    case ErrorKind::MaxStepsExceeded: return "MaxStepsExceeded";
    case ErrorKind::GenerationExhausted: return "GenerationExhausted";
  }
  return "Unknown";
}

void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace cateff
