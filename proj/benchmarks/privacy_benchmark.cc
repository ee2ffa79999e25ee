// Copyright 2026 The pkpram Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <vector>

#include "benchmark/benchmark.h"
#include "pkpram/privacy.h"
#include "pkpram/transition.h"

namespace pkpram {
namespace {

void BM_KFromRrp(benchmark::State& state) {
  const std::vector<size_t> domains(state.range(0), 10);
  const RetentionProfile profile = *RetentionProfile::Uniform(domains.size(), 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(KFromRrp(domains, profile, 1e5));
  }
}
BENCHMARK(BM_KFromRrp)->Arg(1)->Arg(4)->Arg(16);

void BM_AnonymityRatio(benchmark::State& state) {
  const TransitionMatrix a = *BuildRrpMatrix(state.range(0), 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(AnonymityRatio(a));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AnonymityRatio)->RangeMultiplier(4)->Range(4, 256)->Complexity();

void BM_SolveRhoFromK(benchmark::State& state) {
  const std::vector<size_t> domains = {2, 5, 10};
  for (auto _ : state) {
    benchmark::DoNotOptimize(SolveRhoFromK(100, 1e5, domains));
  }
}
BENCHMARK(BM_SolveRhoFromK);

void BM_SolveRhoFromEps(benchmark::State& state) {
  const std::vector<size_t> domains = {2, 5, 10};
  for (auto _ : state) {
    benchmark::DoNotOptimize(SolveRhoFromEps(1.0, domains));
  }
}
BENCHMARK(BM_SolveRhoFromEps);

}  // namespace
}  // namespace pkpram
