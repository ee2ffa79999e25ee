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

#ifndef PKPRAM_RECONSTRUCT_H_
#define PKPRAM_RECONSTRUCT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "pkpram/tabular.h"
#include "pkpram/transition.h"

namespace pkpram {

// Counts of value tuples over a subset of attributes. Cells are stored densely
// in mixed-radix order (last attribute fastest). With no attributes there is
// a single cell holding the record count.
class CrossTab {
 public:
  CrossTab(std::vector<std::string> attributes, std::vector<size_t> domains,
           std::vector<double> counts);

  const std::vector<std::string>& attributes() const { return attributes_; }
  const std::vector<size_t>& domains() const { return domains_; }
  const std::vector<double>& counts() const { return counts_; }
  size_t cell_count() const { return counts_.size(); }

  // Flat index of a tuple over the selected attributes.
  size_t CellIndex(std::span<const uint32_t> tuple) const;
  double count(std::span<const uint32_t> tuple) const {
    return counts_[CellIndex(tuple)];
  }
  double total() const;

 private:
  std::vector<std::string> attributes_;
  std::vector<size_t> domains_;
  std::vector<double> counts_;
};

// Errors: "unknown attribute".
absl::StatusOr<CrossTab> CrossTabulate(const Table& table,
                                       std::span<const std::string> attributes);

struct ReconstructionResult {
  std::vector<std::string> attributes;
  std::vector<size_t> domains;
  // Estimated original count per cell, same layout as CrossTab.
  std::vector<double> estimates;
  std::string method = "matrix-inversion";
  bool negatives_clipped = false;

  double total() const;
};

// Unbiased linear estimate of the original counts. With E[y] = A^T x for the
// product matrix A, solves A^T x = y one attribute axis at a time. Negative
// estimates are kept unless `clip_negatives` (which then breaks the total).
// Errors: "singular matrix", "schema mismatch".
absl::StatusOr<ReconstructionResult> ReconstructByInversion(
    const CrossTab& observed, const AttributeMatrixSet& set,
    bool clip_negatives = false);

// d = sum_v |x_v - x_hat_v| / n. Errors: "domain mismatch".
absl::StatusOr<double> L1Error(const CrossTab& original,
                               const ReconstructionResult& reconstructed,
                               double record_count);

// Independent categorical draws per attribute with weights (i + 1)^-s.
absl::StatusOr<Table> GenerateSyntheticTable(std::span<const size_t> domains,
                                             size_t record_count,
                                             double zipf_exponent,
                                             uint64_t seed);

enum class TrendVariable { kRecords, kAttributes, kK };

struct TrendConfig {
  TrendVariable vary = TrendVariable::kRecords;
  // Values of the varied parameter (record counts, attribute counts, or k).
  std::vector<double> grid;
  // Fixed parameters; unused ones are ignored for the varied axis.
  size_t records = 10000;
  double k = 2.0;
  // Available attribute domains. Attribute sweeps use a prefix of this list;
  // the other sweeps use `attribute_count` leading entries.
  std::vector<size_t> domains = {2, 5, 10, 3};
  size_t attribute_count = 4;
  int seeds = 20;
  double zipf_exponent = 1.0;
  bool clip_negatives = false;
  uint64_t seed = 0;
  // 0 = hardware concurrency.
  unsigned threads = 0;
};

struct TrendRow {
  double varied_value = 0.0;
  double rho = 0.0;
  double epsilon = 0.0;
  double k = 0.0;
  double mean_l1 = 0.0;
  double stderr_l1 = 0.0;
};

// For every grid point: solve rho from k, and for each seed generate data,
// anonymize, cross-tabulate all attributes, reconstruct and measure the L1
// error. The synthetic table for a seed is shared by all grid points that have
// the same record count and attributes.
absl::StatusOr<std::vector<TrendRow>> RunTrendExperiment(
    const TrendConfig& config);

}  // namespace pkpram

#endif  // PKPRAM_RECONSTRUCT_H_
