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
#include "pkpram/mechanism.h"
#include "pkpram/reconstruct.h"

namespace pkpram {
namespace {

void BM_Anonymize(benchmark::State& state) {
  const std::vector<size_t> domains = {2, 5, 10, 3};
  const Table table = *GenerateSyntheticTable(domains, state.range(0), 1.0, 1);
  const PramMechanism mechanism(
      *BuildRrpSet(table.schema(), *RetentionProfile::Uniform(4, 0.3)), 7);
  const unsigned threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mechanism.Anonymize(table, threads));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Anonymize)
    ->Args({100000, 1})
    ->Args({100000, 4})
    ->Unit(benchmark::kMillisecond);

void BM_Reconstruct(benchmark::State& state) {
  const std::vector<size_t> domains = {2, 5, 10, 3};
  const Table table = *GenerateSyntheticTable(domains, 100000, 1.0, 1);
  const AttributeMatrixSet set =
      *BuildRrpSet(table.schema(), *RetentionProfile::Uniform(4, 0.3));
  const Table released = *PramMechanism(set, 2).Anonymize(table);
  const CrossTab observed = *CrossTabulate(released, table.schema().AttributeNames());
  for (auto _ : state) {
    benchmark::DoNotOptimize(ReconstructByInversion(observed, set));
  }
}
BENCHMARK(BM_Reconstruct);

}  // namespace
}  // namespace pkpram
