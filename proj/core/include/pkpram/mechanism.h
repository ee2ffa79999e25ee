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

#ifndef PKPRAM_MECHANISM_H_
#define PKPRAM_MECHANISM_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "pkpram/tabular.h"
#include "pkpram/transition.h"

namespace pkpram {

// Record of the internal randomness of one anonymization run. Test-only
// instrumentation; a real release must never ship this.
struct AnonymizationTrace {
  // permutation[r] is the output position of input record r.
  std::vector<size_t> permutation;
  // Randomized values in input order, before shuffling.
  Table pre_shuffle;
};

struct AnonymizationResult {
  Table released;
  AnonymizationTrace trace;
};

// The PRAM privacy mechanism: every cell is independently resampled from its
// attribute's transition matrix row, then the rows are put in uniformly random
// order. Output is a pure function of (master_seed, input table).
//
// Randomness layout under the master seed:
//   stream 0, counter r * |A| + a  -> uniform for the cell (r, a)
//   stream 1, counter 0            -> Fisher-Yates shuffle generator
// so results do not depend on the worker count.
//
// A one-row table models local randomization by a single respondent; shuffling
// is then left to the collection channel.
class PramMechanism {
 public:
  PramMechanism(AttributeMatrixSet matrix_set, uint64_t master_seed)
      : matrix_set_(std::move(matrix_set)), master_seed_(master_seed) {}

  const AttributeMatrixSet& matrix_set() const { return matrix_set_; }
  uint64_t master_seed() const { return master_seed_; }

  // Fails with "schema mismatch" if the table schema differs from the matrix
  // set schema. `threads` = 0 picks the hardware concurrency.
  absl::StatusOr<Table> Anonymize(const Table& table, unsigned threads = 1) const;
  absl::StatusOr<AnonymizationResult> AnonymizeTraced(
      const Table& table, unsigned threads = 1) const;

 private:
  AttributeMatrixSet matrix_set_;
  uint64_t master_seed_;
};

// Uniform permutation of {0..n-1} by Fisher-Yates.
std::vector<size_t> UniformPermutation(size_t n, uint64_t seed);

}  // namespace pkpram

#endif  // PKPRAM_MECHANISM_H_
