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
#include "pkpram/oracle.h"

namespace pkpram {
namespace {

void BM_EstimationProbability(benchmark::State& state) {
  const size_t n = state.range(0);
  const TableSchema schema = *AnonymousSchema(std::vector<size_t>{3});
  const AttributeMatrixSet set =
      *BuildRrpSet(schema, *RetentionProfile::Uniform(1, 0.5));
  std::vector<ValueTuple> a, b;
  for (size_t r = 0; r < n; ++r) {
    a.push_back({static_cast<uint32_t>(r % 3)});
    b.push_back({static_cast<uint32_t>((r * 2) % 3)});
  }
  const BackgroundKnowledge knowledge =
      BackgroundKnowledge::PointMass(*Table::FromTuples(schema, a));
  const Table released = *Table::FromTuples(schema, b);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        EstimationProbability({knowledge, released, 0, 0}, set));
  }
}
BENCHMARK(BM_EstimationProbability)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

void BM_MaxEstimationSearch(benchmark::State& state) {
  const TableSchema schema = *AnonymousSchema(std::vector<size_t>{3});
  const AttributeMatrixSet set =
      *BuildRrpSet(schema, *RetentionProfile::Uniform(1, 0.5));
  for (auto _ : state) {
    benchmark::DoNotOptimize(MaxEstimationSearch(set, state.range(0), 0, 1));
  }
}
BENCHMARK(BM_MaxEstimationSearch)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace pkpram
