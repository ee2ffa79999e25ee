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

#include "pkpram/mechanism.h"

#include <algorithm>
#include <numeric>
#include <thread>

#include "absl/status/status.h"
#include "pkpram/random.h"
#include "pkpram/status_macros.h"

namespace pkpram {
namespace {

constexpr uint64_t kCellStream = 0;
constexpr uint64_t kShuffleStream = 1;

// Randomizes records [begin, end) into `codes`.
void RandomizeRange(const AttributeMatrixSet& set, const Table& table,
                    uint64_t seed, size_t begin, size_t end,
                    std::vector<uint32_t>& codes) {
  const size_t width = set.attribute_count();
  for (size_t r = begin; r < end; ++r) {
    std::span<const uint32_t> source = table.row(r);
    for (size_t a = 0; a < width; ++a) {
      const uint64_t bits = DeriveSeed(seed, kCellStream, r * width + a);
      codes[r * width + a] = static_cast<uint32_t>(SampleDiscrete(
          set.matrix(a).row(source[a]), UnitInterval(bits)));
    }
  }
}

}  // namespace

std::vector<size_t> UniformPermutation(size_t n, uint64_t seed) {
  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), size_t{0});
  SplitMixRng rng(seed);
  for (size_t i = n; i > 1; --i) {
    const size_t j = static_cast<size_t>(rng.UniformInt(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

absl::StatusOr<AnonymizationResult> PramMechanism::AnonymizeTraced(
    const Table& table, unsigned threads) const {
  if (!(table.schema() == matrix_set_.schema())) {
    return absl::InvalidArgumentError(
        "schema mismatch: table schema differs from the matrix set schema");
  }
  const size_t n = table.record_count();
  const size_t width = matrix_set_.attribute_count();
  std::vector<uint32_t> codes(n * width);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const size_t workers = std::min<size_t>(threads, std::max<size_t>(n / 4096, 1));
  if (workers <= 1) {
    RandomizeRange(matrix_set_, table, master_seed_, 0, n, codes);
  } else {
    std::vector<std::jthread> pool;
    const size_t chunk = (n + workers - 1) / workers;
    for (size_t w = 0; w < workers; ++w) {
      const size_t begin = w * chunk;
      const size_t end = std::min(n, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back([&, begin, end] {
        RandomizeRange(matrix_set_, table, master_seed_, begin, end, codes);
      });
    }
  }

  std::vector<ValueTuple> pre_rows(n, ValueTuple(width));
  for (size_t r = 0; r < n; ++r) {
    std::copy_n(codes.begin() + r * width, width, pre_rows[r].begin());
  }
  std::vector<size_t> permutation =
      UniformPermutation(n, DeriveSeed(master_seed_, kShuffleStream, 0));
  std::vector<ValueTuple> out_rows(n);
  for (size_t r = 0; r < n; ++r) out_rows[permutation[r]] = pre_rows[r];

  PKPRAM_ASSIGN_OR_RETURN(Table pre_shuffle,
                          Table::FromTuples(table.schema(), pre_rows));
  PKPRAM_ASSIGN_OR_RETURN(Table released,
                          Table::FromTuples(table.schema(), out_rows));
  return AnonymizationResult{
      std::move(released),
      AnonymizationTrace{std::move(permutation), std::move(pre_shuffle)}};
}

absl::StatusOr<Table> PramMechanism::Anonymize(const Table& table,
                                               unsigned threads) const {
  PKPRAM_ASSIGN_OR_RETURN(AnonymizationResult result,
                          AnonymizeTraced(table, threads));
  return std::move(result.released);
}

}  // namespace pkpram
