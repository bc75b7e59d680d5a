// Part of the CatEff project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <json.hpp>

#include "cateff/conformance.hpp"
#include "cateff/denote.hpp"
#include "cateff/eval.hpp"
#include "cateff/typecheck.hpp"

using namespace cateff;

namespace {

auto step_cap(std::size_t fallback) -> std::size_t {
  if (const char* env = std::getenv("CATEFF_MAX_STEPS")) {
    try {
      return std::stoul(env);
    } catch (const std::exception&) {
      std::cerr << "cateff: ignoring CATEFF_MAX_STEPS=" << env << "\n";
    }
  }
  return fallback;
}

auto judgement_line(const Program& p, const Judgement& j) -> std::string {
  return "⊢_{" + j.grade.to_string() + "} " + p.name + " : " +
         j.type->to_string();
}

auto selected(const Theory& theory, const std::string& name)
    -> std::vector<const Program*> {
  std::vector<const Program*> out;
  for (const auto& p : theory.programs) {
    if (name.empty() || p.name == name) out.push_back(&p);
  }
  if (!name.empty() && out.empty()) {
    fail(ErrorKind::UnboundName, "no program named '" + name + "'");
  }
  return out;
}

auto cmd_check(const std::string& file) -> int {
  Theory theory = parse_file(file);
  TypeChecker checker;
  for (const auto& h : theory.handlers) {
    HandlerProfile p = checker.check_handler(*h);
    std::cout << "⊢^{" << h->functor->name() << "}_{" << p.at.name()
              << "} " << h->name << " : " << p.handled->to_string()
              << " => " << p.result->to_string() << "\n";
  }
  for (const auto& p : theory.programs) {
    std::cout << judgement_line(p, checker.check_program(p)) << "\n";
  }
  return 0;
}

auto cmd_run(const std::string& file, bool trace, std::size_t max_steps,
             const std::string& program) -> int {
  Theory theory = parse_file(file);
  TypeChecker checker;
  for (const Program* p : selected(theory, program)) {
    checker.check_program(*p);
    Evaluator ev(p->signature, checker);
    Trace t = ev.run(p->body, max_steps);
    std::cout << "program " << p->name << "\n";
    if (trace) {
      for (std::size_t i = 0; i < t.configurations.size(); ++i) {
        const Configuration& c = t.configurations[i];
        std::cout << "  " << i;
        if (!c.rule.empty()) std::cout << " [" << c.rule << "]";
        std::cout << " @ " << c.judgement->grade.to_string() << "\n    "
                  << to_source(c.term) << "\n";
      }
    }
    std::cout << "  result: " << to_source(t.final_term()) << "\n"
              << "  steps: " << t.steps() << "\n";
    if (t.outcome == Decomposition::Shape::OpAtTop) {
      std::cout << "  stopped at an unhandled operation\n";
    }
  }
  return 0;
}

auto cmd_denote(const std::string& file, bool json,
                const std::string& program) -> int {
  Theory theory = parse_file(file);
  TypeChecker checker;
  nlohmann::json out = nlohmann::json::object();
  for (const Program* p : selected(theory, program)) {
    checker.check_program(*p);
    TreePtr t = denote_computation({}, *p->signature, p->body);
    if (json) {
      out[p->name] = nlohmann::json::parse(to_json(t));
    } else {
      std::cout << p->name << " : " << t->grade.to_string() << "\n"
                << to_text(t);
    }
  }
  if (json) std::cout << out.dump(2) << "\n";
  return 0;
}

auto cmd_conform(const std::string& file, const ConformanceOptions& options,
                 bool json) -> int {
  Theory theory = parse_file(file);
  ConformanceReport report = run_conformance(theory, options);
  std::cout << (json ? report.to_json() + "\n" : report.summary());
  return report.ok() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Category-graded algebraic effects and handlers"};
  app.require_subcommand(1);

  std::string file;
  std::string program;

  auto* check = app.add_subcommand("check", "Typecheck handlers and programs");
  check->add_option("file", file, "Theory file")->required();

  bool trace = false;
  std::size_t max_steps = kDefaultMaxSteps;
  auto* run = app.add_subcommand("run", "Evaluate programs");
  run->add_option("file", file, "Theory file")->required();
  run->add_flag("--trace", trace, "Print every configuration");
  run->add_option("--max-steps", max_steps, "Step limit");
  run->add_option("--program", program, "Only run this program");

  bool json = false;
  auto* denote = app.add_subcommand("denote", "Print program denotations");
  denote->add_option("file", file, "Theory file")->required();
  denote->add_flag("--json", json, "Print JSON");
  denote->add_option("--program", program, "Only this program");

  ConformanceOptions conform_options;
  bool json_report = false;
  auto* conform =
      app.add_subcommand("conform", "Check the metatheory on a theory");
  conform->add_option("file", file, "Theory file")->required();
  conform->add_option("--seed", conform_options.generation.seed, "RNG seed");
  conform->add_option("--count", conform_options.generation.count,
                      "Number of generated terms");
  conform->add_option("--depth", conform_options.generation.depth,
                      "Maximum term depth");
  conform->add_option("--signature", conform_options.signature,
                      "Signature of the generated terms");
  conform->add_flag("--json-report", json_report, "Print the report as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(file);
    if (run->parsed()) return cmd_run(file, trace, step_cap(max_steps), program);
    if (denote->parsed()) return cmd_denote(file, json, program);
    conform_options.max_steps = step_cap(conform_options.max_steps);
    return cmd_conform(file, conform_options, json_report);
  } catch (const Error& e) {
    std::cerr << "cateff: " << error_kind_name(e.kind()) << ": " << e.what()
              << "\n";
    if (e.kind() == ErrorKind::MaxStepsExceeded ||
        e.kind() == ErrorKind::MissingClause) {
      return 2;
    }
    return 1;
  }
}
