/*
 * Copyright 2026 The fullerkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fullerkit/sweeps.hpp"

#include <benchmark/benchmark.h>

using namespace fullerkit;

namespace {

SweepOptions options(bool parallel) {
  SweepOptions o;
  o.parallel = parallel;
  o.samples = 1000;
  return o;
}

void BM_Pfaffian(benchmark::State& state) {
  const SweepOptions o = options(state.range(1) != 0);
  for (auto _ : state) benchmark::DoNotOptimize(pfaffian_suite(static_cast<int>(state.range(0)), o));
}
BENCHMARK(BM_Pfaffian)->ArgsProduct({{4, 8}, {0, 1}})->ArgNames({"size", "parallel"})->Unit(benchmark::kMillisecond);

void BM_Kernel(benchmark::State& state) {
  const SweepOptions o = options(state.range(1) != 0);
  for (auto _ : state) benchmark::DoNotOptimize(kernel_suite(static_cast<int>(state.range(0)), o));
}
BENCHMARK(BM_Kernel)->ArgsProduct({{6, 8}, {0, 1}})->ArgNames({"size", "parallel"})->Unit(benchmark::kMillisecond);

void BM_Phi0(benchmark::State& state) {
  const SweepOptions o = options(state.range(0) != 0);
  for (auto _ : state) benchmark::DoNotOptimize(phi0_suite(o));
}
BENCHMARK(BM_Phi0)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_FullerLemma(benchmark::State& state) {
  const SweepOptions o = options(state.range(0) != 0);
  for (auto _ : state) benchmark::DoNotOptimize(fuller_lemma_suite(500, o));
}
BENCHMARK(BM_FullerLemma)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
  configure_threads();
  benchmark::Initialize(&argc, argv);
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
