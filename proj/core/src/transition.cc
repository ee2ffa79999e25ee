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

#include "pkpram/transition.h"

#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "pkpram/status_macros.h"

namespace pkpram {

ValidationReport ValidateRows(const std::vector<std::vector<double>>& rows,
                              double tolerance) {
  ValidationReport report;
  if (rows.empty()) {
    report.square = false;
    return report;
  }
  for (size_t u = 0; u < rows.size(); ++u) {
    if (rows[u].size() != rows.size()) report.square = false;
    double sum = 0.0;
    for (double p : rows[u]) {
      if (!std::isfinite(p) || p < 0.0) report.has_negative = true;
      if (p > 1.0) report.has_above_one = true;
      if (p == 0.0) {
        report.has_zero = true;
        ++report.zero_entries;
      }
      sum += p;
    }
    const double deviation = std::abs(sum - 1.0);
    if (!(deviation <= tolerance)) report.bad_rows.push_back(u);
    if (deviation > report.max_row_sum_deviation || std::isnan(deviation)) {
      report.max_row_sum_deviation = deviation;
    }
  }
  return report;
}

absl::StatusOr<TransitionMatrix> TransitionMatrix::FromRows(
    const std::vector<std::vector<double>>& rows, double tolerance) {
  const ValidationReport report = ValidateRows(rows, tolerance);
  if (!report.square) {
    return absl::InvalidArgumentError("transition matrix must be square");
  }
  if (report.has_negative || report.has_above_one) {
    return absl::InvalidArgumentError(
        "invalid probability: transition matrix entries must lie in [0, 1]");
  }
  if (!report.bad_rows.empty()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "row-sum violation: row ", report.bad_rows.front(),
        " deviates from 1 by ", report.max_row_sum_deviation));
  }
  const size_t m = rows.size();
  std::vector<double> entries;
  entries.reserve(m * m);
  for (const std::vector<double>& row : rows) {
    double sum = 0.0;
    for (double p : row) sum += p;
    for (double p : row) entries.push_back(p / sum);
  }
  return TransitionMatrix(m, std::move(entries));
}

TransitionMatrix TransitionMatrix::Identity(size_t domain_size) {
  std::vector<double> entries(domain_size * domain_size, 0.0);
  for (size_t i = 0; i < domain_size; ++i) entries[i * domain_size + i] = 1.0;
  return TransitionMatrix(domain_size, std::move(entries));
}

TransitionMatrix TransitionMatrix::Uniform(size_t domain_size) {
  return TransitionMatrix(
      domain_size,
      std::vector<double>(domain_size * domain_size, 1.0 / domain_size));
}

std::vector<std::vector<double>> TransitionMatrix::Rows() const {
  std::vector<std::vector<double>> rows;
  for (size_t u = 0; u < size_; ++u) {
    std::span<const double> r = row(u);
    rows.emplace_back(r.begin(), r.end());
  }
  return rows;
}

bool TransitionMatrix::strictly_positive() const {
  for (double p : entries_) {
    if (!(p > 0.0)) return false;
  }
  return true;
}

ValidationReport Validate(const TransitionMatrix& matrix) {
  return ValidateRows(matrix.Rows());
}

absl::StatusOr<TransitionMatrix> BuildRrpMatrix(size_t domain_size,
                                                double rho) {
  if (domain_size == 0) {
    return absl::InvalidArgumentError("domain size must be positive");
  }
  if (!(rho >= 0.0 && rho <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid probability: rho = ", rho));
  }
  const double off = (1.0 - rho) / static_cast<double>(domain_size);
  std::vector<std::vector<double>> rows(domain_size,
                                        std::vector<double>(domain_size, off));
  for (size_t v = 0; v < domain_size; ++v) rows[v][v] = rho + off;
  return TransitionMatrix::FromRows(rows);
}

absl::StatusOr<RetentionProfile> RetentionProfile::Create(
    std::vector<double> rhos) {
  for (size_t i = 0; i < rhos.size(); ++i) {
    if (!(rhos[i] >= 0.0 && rhos[i] <= 1.0)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "invalid probability: rho[", i, "] = ", rhos[i]));
    }
  }
  return RetentionProfile(std::move(rhos));
}

absl::StatusOr<RetentionProfile> RetentionProfile::Uniform(
    size_t attribute_count, double rho) {
  return Create(std::vector<double>(attribute_count, rho));
}

absl::StatusOr<AttributeMatrixSet> AttributeMatrixSet::Create(
    TableSchema schema, std::vector<TransitionMatrix> matrices) {
  if (matrices.size() != schema.attribute_count()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "length mismatch: ", matrices.size(), " matrices for ",
        schema.attribute_count(), " attributes"));
  }
  for (size_t a = 0; a < matrices.size(); ++a) {
    if (matrices[a].domain_size() != schema.attribute(a).domain_size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "schema mismatch: matrix for '", schema.attribute(a).name(),
          "' has size ", matrices[a].domain_size(), ", domain has ",
          schema.attribute(a).domain_size(), " values"));
    }
  }
  return AttributeMatrixSet(std::move(schema), std::move(matrices));
}

double AttributeMatrixSet::ProductEntryUnchecked(
    std::span<const uint32_t> from, std::span<const uint32_t> to) const {
  double p = 1.0;
  for (size_t a = 0; a < matrices_.size(); ++a) {
    p *= matrices_[a](from[a], to[a]);
  }
  return p;
}

absl::StatusOr<double> AttributeMatrixSet::ProductEntry(
    std::span<const uint32_t> from, std::span<const uint32_t> to) const {
  if (from.size() != matrices_.size() || to.size() != matrices_.size()) {
    return absl::OutOfRangeError("index out of range: tuple length differs "
                                 "from the attribute count");
  }
  for (size_t a = 0; a < matrices_.size(); ++a) {
    if (from[a] >= matrices_[a].domain_size() ||
        to[a] >= matrices_[a].domain_size()) {
      return absl::OutOfRangeError(absl::StrCat(
          "index out of range for attribute '", schema_.attribute(a).name(),
          "'"));
    }
  }
  return ProductEntryUnchecked(from, to);
}

absl::StatusOr<AttributeMatrixSet> AttributeMatrixSet::Select(
    std::span<const size_t> positions) const {
  PKPRAM_ASSIGN_OR_RETURN(TableSchema schema, schema_.Select(positions));
  std::vector<TransitionMatrix> matrices;
  for (size_t p : positions) matrices.push_back(matrices_[p]);
  return AttributeMatrixSet(std::move(schema), std::move(matrices));
}

absl::StatusOr<AttributeMatrixSet> BuildRrpSet(
    const TableSchema& schema, const RetentionProfile& profile) {
  if (profile.size() != schema.attribute_count()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "length mismatch: ", profile.size(), " retention probabilities for ",
        schema.attribute_count(), " attributes"));
  }
  std::vector<TransitionMatrix> matrices;
  for (size_t a = 0; a < schema.attribute_count(); ++a) {
    PKPRAM_ASSIGN_OR_RETURN(
        TransitionMatrix m,
        BuildRrpMatrix(schema.attribute(a).domain_size(), profile[a]));
    matrices.push_back(std::move(m));
  }
  return AttributeMatrixSet::Create(schema, std::move(matrices));
}

std::vector<ValueTuple> EnumerateProductDomain(
    std::span<const size_t> domains) {
  std::vector<ValueTuple> out;
  for (size_t d : domains) {
    if (d == 0) return out;
  }
  ValueTuple current(domains.size(), 0);
  while (true) {
    out.push_back(current);
    size_t a = domains.size();
    while (a > 0) {
      --a;
      if (++current[a] < domains[a]) break;
      current[a] = 0;
      if (a == 0) return out;
    }
    if (domains.empty()) return out;
  }
}

}  // namespace pkpram
