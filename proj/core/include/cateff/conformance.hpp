// Part of the CatEff project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

// Executable metatheory. Programs and generated terms are run through the
// checker, the evaluator and the denotation, and the results are compared.

#ifndef CATEFF_CONFORMANCE_HPP
#define CATEFF_CONFORMANCE_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cateff/eval.hpp"
#include "cateff/freemodel.hpp"
#include "cateff/syntax.hpp"
#include "cateff/typecheck.hpp"

namespace cateff {

inline constexpr std::size_t kDefaultMaxSteps = 100000;

struct SoundnessReport {
  bool ok = true;
  std::size_t steps = 0;
  // Set on the first configuration whose denotation differs from the
  // previous one.
  std::optional<std::size_t> divergence;
  std::string rule;
  std::string before;
  std::string after;
};

// Requires a closed program with primitive result type (NonComparable
// otherwise).
auto verify_soundness_along_trace(const CompPtr& m,
                                  std::shared_ptr<const GradedSignature> sig,
                                  TypeChecker& checker,
                                  std::size_t max_steps = kDefaultMaxSteps)
    -> SoundnessReport;

struct AdequacyReport {
  // False when the denotation is not a unit leaf e(a, *).
  bool applicable = false;
  bool ok = true;
  std::size_t steps = 0;
  std::string message;
};

// Requires a closed program of type 1 at an identity grade.
auto verify_adequacy(const CompPtr& m,
                     std::shared_ptr<const GradedSignature> sig,
                     TypeChecker& checker,
                     std::size_t max_steps = kDefaultMaxSteps)
    -> AdequacyReport;

struct GeneratedTerm {
  CompPtr term;
  TypePtr type;
  Morphism grade;
};

struct Corpus {
  std::vector<GeneratedTerm> terms;
  // Candidates rejected by the checker.
  std::size_t discarded = 0;
};

struct GenerationOptions {
  std::uint64_t seed = 1;
  std::size_t count = 1000;
  std::size_t depth = 5;
  // Every n-th term is generated at type 1 and an identity grade; 0 turns
  // this off.
  std::size_t unit_every = 4;
};

// Closed terms over `sig` with primitive result types. Handlers are drawn
// from the theory's handlers that have a default clause for every
// operation. Throws GenerationExhausted.
auto generate_wellgraded_terms(const Theory& theory,
                               std::shared_ptr<const GradedSignature> sig,
                               const GenerationOptions& options,
                               TypeChecker& checker) -> Corpus;

struct Violation {
  std::string check;
  std::string subject;
  std::string term;
  std::string message;
};

struct ConformanceOptions {
  GenerationOptions generation;
  std::size_t max_steps = kDefaultMaxSteps;
  // Signature of the generated terms; defaults to that of the first
  // program, else the first signature.
  std::string signature;
};

struct CheckCount {
  std::size_t checked = 0;
  std::size_t passed = 0;
};

struct ConformanceReport {
  std::size_t programs = 0;
  std::size_t generated = 0;
  std::size_t discarded = 0;
  CheckCount progress;
  CheckCount preservation;
  CheckCount safety;
  CheckCount factorization;
  CheckCount soundness;
  CheckCount adequacy;
  std::size_t steps = 0;
  std::vector<Violation> violations;

  auto ok() const -> bool { return violations.empty(); }
  auto to_json() const -> std::string;
  auto summary() const -> std::string;
};

// Progress, Preservation, Safety and context factorization on one closed
// term, recorded in `report` under `subject`.
void check_metatheory(const CompPtr& m,
                      std::shared_ptr<const GradedSignature> sig,
                      TypeChecker& checker, std::size_t max_steps,
                      const std::string& subject, ConformanceReport& report);

// All checks over the programs of a theory and a generated corpus.
auto run_conformance(const Theory& theory, const ConformanceOptions& options)
    -> ConformanceReport;

}  // namespace cateff

#endif  // CATEFF_CONFORMANCE_HPP
