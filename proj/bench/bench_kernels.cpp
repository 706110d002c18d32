// Copyright 2026 The sqpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference vs OpenMP kernels. Arg is the worker count for the
// parallel variants.

#include <benchmark/benchmark.h>

#include "sqpt/channels.hpp"
#include "sqpt/estimators.hpp"
#include "sqpt/pattern.hpp"

using namespace sqpt;

namespace {

const ProcessRun& sample_run() {
  static const ProcessRun run = [] {
    const auto params = probe_params_from_tmsv(0.5, 1.0);
    return simulate_process_run(loss_channel(0.7, 30), params, 0.85, 200000, 7);
  }();
  return run;
}

const GridSpec kGrid{-10.0, 10.0, 2001};

void BM_EstimateChoiSerial(benchmark::State& state) {
  const auto& run = sample_run();
  for (auto _ : state) benchmark::DoNotOptimize(estimate_choi_serial(run.records, run.meta, 3));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(run.records.size()));
}

void BM_EstimateChoiParallel(benchmark::State& state) {
  const auto& run = sample_run();
  EstimatorOptions opt;
  opt.workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_choi(run.records, run.meta, 3, opt));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(run.records.size()));
}

void BM_BuildTableSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_table_serial(4, 0.85, kGrid));
}

void BM_BuildTableParallel(benchmark::State& state) {
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_table(4, 0.85, kGrid, workers));
}

}  // namespace

BENCHMARK(BM_EstimateChoiSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimateChoiParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildTableSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildTableParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
