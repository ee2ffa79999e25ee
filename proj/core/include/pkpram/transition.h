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

#ifndef PKPRAM_TRANSITION_H_
#define PKPRAM_TRANSITION_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "pkpram/tabular.h"

namespace pkpram {

// Row-sum tolerance enforced on every constructed matrix.
inline constexpr double kRowSumTolerance = 1e-12;

// Findings of a structural check on a candidate transition matrix. Nothing
// here is an error by itself; callers decide what to reject.
struct ValidationReport {
  bool square = true;
  bool has_negative = false;
  bool has_above_one = false;
  bool has_zero = false;
  size_t zero_entries = 0;
  double max_row_sum_deviation = 0.0;
  // Rows whose sum deviates from 1 by more than the tolerance.
  std::vector<size_t> bad_rows;

  // Row-stochastic within tolerance. Zero entries do not affect validity.
  bool valid() const {
    return square && !has_negative && !has_above_one && bad_rows.empty();
  }
  bool strictly_positive() const { return valid() && !has_zero; }
};

ValidationReport ValidateRows(const std::vector<std::vector<double>>& rows,
                              double tolerance = kRowSumTolerance);

// Square row-stochastic matrix; entry (u, v) is the probability that source
// value u is released as v.
class TransitionMatrix {
 public:
  // Fails unless `rows` is square and row-stochastic within `tolerance`.
  // Rows are renormalized after the check, so the stored matrix always meets
  // kRowSumTolerance.
  static absl::StatusOr<TransitionMatrix> FromRows(
      const std::vector<std::vector<double>>& rows,
      double tolerance = kRowSumTolerance);

  static TransitionMatrix Identity(size_t domain_size);
  static TransitionMatrix Uniform(size_t domain_size);

  size_t domain_size() const { return size_; }
  double operator()(size_t from, size_t to) const {
    return entries_[from * size_ + to];
  }
  std::span<const double> row(size_t from) const {
    return {entries_.data() + from * size_, size_};
  }
  std::vector<std::vector<double>> Rows() const;

  bool strictly_positive() const;

  friend bool operator==(const TransitionMatrix&,
                         const TransitionMatrix&) = default;

 private:
  TransitionMatrix(size_t size, std::vector<double> entries)
      : size_(size), entries_(std::move(entries)) {}

  size_t size_;
  std::vector<double> entries_;
};

ValidationReport Validate(const TransitionMatrix& matrix);

// Retention-replacement perturbation: keep the value with probability `rho`,
// otherwise replace it with a uniform draw over the `domain_size` values.
// Diagonal rho + (1 - rho) / m, off-diagonal (1 - rho) / m.
absl::StatusOr<TransitionMatrix> BuildRrpMatrix(size_t domain_size,
                                                double rho);

// Per-attribute retention probabilities.
class RetentionProfile {
 public:
  static absl::StatusOr<RetentionProfile> Create(std::vector<double> rhos);
  static absl::StatusOr<RetentionProfile> Uniform(size_t attribute_count,
                                                  double rho);

  const std::vector<double>& values() const { return rhos_; }
  size_t size() const { return rhos_.size(); }
  double operator[](size_t i) const { return rhos_[i]; }

 private:
  explicit RetentionProfile(std::vector<double> rhos) : rhos_(std::move(rhos)) {}
  std::vector<double> rhos_;
};

// One transition matrix per schema attribute. The bundled matrix over the
// product domain is never materialized; see ProductEntry.
class AttributeMatrixSet {
 public:
  static absl::StatusOr<AttributeMatrixSet> Create(
      TableSchema schema, std::vector<TransitionMatrix> matrices);

  const TableSchema& schema() const { return schema_; }
  size_t attribute_count() const { return matrices_.size(); }
  const TransitionMatrix& matrix(size_t attribute) const {
    return matrices_[attribute];
  }
  const std::vector<TransitionMatrix>& matrices() const { return matrices_; }

  // Entry of the product matrix: prod_a (A_a)[from_a][to_a].
  absl::StatusOr<double> ProductEntry(std::span<const uint32_t> from,
                                      std::span<const uint32_t> to) const;
  // As above without bounds checks.
  double ProductEntryUnchecked(std::span<const uint32_t> from,
                               std::span<const uint32_t> to) const;

  // Restriction to a subset of attributes (positions in schema order).
  absl::StatusOr<AttributeMatrixSet> Select(
      std::span<const size_t> positions) const;

 private:
  AttributeMatrixSet(TableSchema schema, std::vector<TransitionMatrix> matrices)
      : schema_(std::move(schema)), matrices_(std::move(matrices)) {}

  TableSchema schema_;
  std::vector<TransitionMatrix> matrices_;
};

// One RRP matrix per attribute from rho_a and |V_a|. Errors: "length
// mismatch" when the profile and schema disagree in size.
absl::StatusOr<AttributeMatrixSet> BuildRrpSet(const TableSchema& schema,
                                               const RetentionProfile& profile);

// Enumerates the product domain in mixed-radix order (last attribute fastest).
std::vector<ValueTuple> EnumerateProductDomain(std::span<const size_t> domains);

}  // namespace pkpram

#endif  // PKPRAM_TRANSITION_H_
