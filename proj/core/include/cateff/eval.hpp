// Part of the CatEff project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

// Small-step reduction: decomposition into a frame stack and a focus,
// contraction of redexes, and traces.

#ifndef CATEFF_EVAL_HPP
#define CATEFF_EVAL_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cateff/syntax.hpp"
#include "cateff/typecheck.hpp"

namespace cateff {

// let x <- [] in N  |  handle [] with H  |  weaken g {[]} h
struct Frame {
  enum class Kind { Let, Handle, Weaken };
  Kind kind;
  std::string var;
  CompPtr body;
  HandlerPtr handler;
  Morphism pre;
  Morphism post;
};

struct Decomposition {
  enum class Shape {
    // val V, or weaken g {val V} id at the top.
    Value,
    // E[do op(V)] with no enclosing handler.
    OpAtTop,
    Redex,
  };
  Shape shape;
  // Outermost first.
  std::vector<Frame> frames;
  CompPtr focus;
  // Name of the rule that contracts a Redex.
  std::string rule;
};

// Throws Stuck when the term is neither terminal nor reducible.
auto decompose(const CompPtr& m) -> Decomposition;
auto plug(const std::vector<Frame>& frames, CompPtr m) -> CompPtr;
// The frames around an operation call, moved so that the hole starts at c:
// identity coercions of weaken frames become id_c.
auto retarget(std::vector<Frame> frames, Object c) -> std::vector<Frame>;

struct Step {
  CompPtr term;
  std::string rule;
};

struct Configuration {
  CompPtr term;
  // Rule that produced this configuration; empty for the start.
  std::string rule;
  std::optional<Judgement> judgement;
};

struct Trace {
  std::vector<Configuration> configurations;
  Decomposition::Shape outcome;

  auto final_term() const -> const CompPtr& {
    return configurations.back().term;
  }
  auto steps() const -> std::size_t { return configurations.size() - 1; }
};

class Evaluator {
 public:
  // `signature` is the signature of the top-level terms to be run.
  Evaluator(std::shared_ptr<const GradedSignature> signature,
            TypeChecker& checker)
      : sig_(std::move(signature)), checker_(&checker) {}

  // nullopt on terminal configurations.
  auto step(const CompPtr& m) -> std::optional<Step>;

  // Grade of inner[val_c y] for y : Q, where op : P ~> Q @ g : _ -> c and
  // inner is a handler-free context inside a handler for h.source.
  auto continuation_grade(const std::vector<Frame>& inner,
                          const HandlerDecl& h, const OpDecl& op) -> Morphism;

  // Throws MaxStepsExceeded, MissingClause or Stuck. With check_types every
  // configuration is typechecked and must keep the type and grade of the
  // start term.
  auto run(const CompPtr& m, std::size_t max_steps, bool check_types = true)
      -> Trace;

 private:
  auto contract(const Decomposition& d) -> CompPtr;

  std::shared_ptr<const GradedSignature> sig_;
  TypeChecker* checker_;
};

}  // namespace cateff

#endif  // CATEFF_EVAL_HPP
