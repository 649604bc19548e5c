// Copyright 2026 The hitlab Authors.
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

// Microbenchmarks for the inner loops that dominate experiment wall time.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "hitlab/hitlab.hpp"

namespace {

using namespace hitlab;

void BM_OrbitFloat(benchmark::State& state) {
  const auto quad = MapSystem::quadratic(2.0);
  auto orbit = OrbitGenerator::sampled(quad, 1);
  for (auto _ : state) benchmark::DoNotOptimize(orbit.next());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_OrbitFloat);

void BM_OrbitBitStream(benchmark::State& state) {
  auto orbit = OrbitGenerator::sampled(MapSystem::doubling(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(orbit.next());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_OrbitBitStream);

void BM_FirstHittingTime(benchmark::State& state) {
  const auto doubling = MapSystem::doubling();
  const double delta = 1.0 / static_cast<double>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto orbit = OrbitGenerator::sampled(doubling, ++seed);
    benchmark::DoNotOptimize(first_hitting_time(orbit, {0.37}, delta, default_cap(2 * delta)));
  }
}
BENCHMARK(BM_FirstHittingTime)->Arg(100)->Arg(1000)->Arg(10000);

void BM_SampleHistogram(benchmark::State& state) {
  const auto quad = MapSystem::quadratic(2.0);
  const auto iterates = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_histogram(quad, iterates, 4096, 7, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleHistogram)->Arg(1 << 20);

void BM_GevFit(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::extreme_value_distribution<double> gumbel(0.0, 1.0);
  std::vector<double> values(static_cast<std::size_t>(state.range(0)));
  for (auto& v : values) v = gumbel(rng);
  const EmpiricalDistribution sample(values);
  for (auto _ : state) benchmark::DoNotOptimize(gev_fit(sample));
}
BENCHMARK(BM_GevFit)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
