// Part of the CatEff project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "cateff/conformance.hpp"
#include "cateff/denote.hpp"
#include "cateff/eval.hpp"

using namespace cateff;

namespace {

auto load(const std::string& file) -> Theory {
  return parse_file(std::string(CATEFF_PROGRAMS_DIR) + "/" + file);
}

void BM_NormalizeSession(benchmark::State& state) {
  auto s = load("session.ceff").category("Session");
  auto paths = s->composable_paths(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    for (const auto& p : paths) benchmark::DoNotOptimize(s->normalize(p));
  }
  state.SetItemsProcessed(state.iterations() * paths.size());
}
BENCHMARK(BM_NormalizeSession)->Arg(3)->Arg(5);

void BM_Parse(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(load("mutable_store.ceff"));
}
BENCHMARK(BM_Parse);

void BM_Typecheck(benchmark::State& state) {
  Theory t = load("mutable_store.ceff");
  for (auto _ : state) {
    TypeChecker checker;
    for (const auto& p : t.programs) {
      benchmark::DoNotOptimize(checker.check_program(p));
    }
  }
}
BENCHMARK(BM_Typecheck);

void BM_RunStored(benchmark::State& state) {
  Theory t = load("mutable_store.ceff");
  const Program& p = *t.program("stored");
  TypeChecker checker;
  checker.check_program(p);
  bool check_types = state.range(0) != 0;
  for (auto _ : state) {
    Evaluator ev(p.signature, checker);
    benchmark::DoNotOptimize(ev.run(p.body, 1000, check_types));
  }
}
BENCHMARK(BM_RunStored)->Arg(0)->Arg(1);

void BM_DenoteStored(benchmark::State& state) {
  Theory t = load("mutable_store.ceff");
  const Program& p = *t.program("stored");
  for (auto _ : state) {
    benchmark::DoNotOptimize(denote_computation({}, *p.signature, p.body));
  }
}
BENCHMARK(BM_DenoteStored);

void BM_Generate(benchmark::State& state) {
  Theory t = load("gunit.ceff");
  GenerationOptions options;
  options.count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    TypeChecker checker;
    benchmark::DoNotOptimize(
        generate_wellgraded_terms(t, t.signature("Sigma"), options, checker));
  }
}
BENCHMARK(BM_Generate)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
