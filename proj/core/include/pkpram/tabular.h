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

#ifndef PKPRAM_TABULAR_H_
#define PKPRAM_TABULAR_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace pkpram {

// Per-attribute domain indices of one record, in schema attribute order.
using ValueTuple = std::vector<uint32_t>;

// A single categorical attribute and its ordered value domain.
class AttributeSchema {
 public:
  // Fails if `values` is empty or contains duplicate labels.
  static absl::StatusOr<AttributeSchema> Create(std::string name,
                                                std::vector<std::string> values);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& values() const { return values_; }
  size_t domain_size() const { return values_.size(); }

  // Index of `label` in the domain (exact string match).
  absl::StatusOr<uint32_t> IndexOf(std::string_view label) const;

  friend bool operator==(const AttributeSchema&, const AttributeSchema&) =
      default;

 private:
  AttributeSchema(std::string name, std::vector<std::string> values)
      : name_(std::move(name)), values_(std::move(values)) {}

  std::string name_;
  std::vector<std::string> values_;
};

// Ordered attribute set. The product domain V is the Cartesian product of the
// attribute domains.
class TableSchema {
 public:
  // Fails on an empty attribute list or duplicate attribute names.
  static absl::StatusOr<TableSchema> Create(
      std::vector<AttributeSchema> attributes);

  const std::vector<AttributeSchema>& attributes() const { return attributes_; }
  const AttributeSchema& attribute(size_t i) const { return attributes_[i]; }
  size_t attribute_count() const { return attributes_.size(); }
  std::vector<size_t> DomainSizes() const;

  // |V| as a double; exact up to 2^53.
  double TotalDomainSize() const;

  absl::StatusOr<size_t> AttributeIndex(std::string_view name) const;

  // Schema restricted to the given attribute positions, in that order.
  absl::StatusOr<TableSchema> Select(std::span<const size_t> positions) const;

  std::vector<std::string> AttributeNames() const;

  friend bool operator==(const TableSchema&, const TableSchema&) = default;

 private:
  explicit TableSchema(std::vector<AttributeSchema> attributes)
      : attributes_(std::move(attributes)) {}

  std::vector<AttributeSchema> attributes_;
};

// Builds a schema whose attribute i is named `a<i>` with labels "0".."m-1".
// Used when only domain sizes are known.
absl::StatusOr<TableSchema> AnonymousSchema(std::span<const size_t> domains);

// An immutable table tau: R -> V. Record identities are row indices.
class Table {
 public:
  // Rows given as labels; every label is validated against its domain.
  static absl::StatusOr<Table> FromLabels(
      TableSchema schema, const std::vector<std::vector<std::string>>& rows);

  // Rows given as domain indices.
  static absl::StatusOr<Table> FromTuples(TableSchema schema,
                                          const std::vector<ValueTuple>& rows);

  const TableSchema& schema() const { return schema_; }
  size_t record_count() const {
    return schema_.attribute_count() == 0
               ? 0
               : codes_.size() / schema_.attribute_count();
  }

  // Index tuple of record `row`; fails with OutOfRange past the end.
  absl::StatusOr<ValueTuple> value_index(size_t row) const;

  // Unchecked view of record `row`.
  std::span<const uint32_t> row(size_t row) const {
    const size_t width = schema_.attribute_count();
    return {codes_.data() + row * width, width};
  }
  const std::string& label(size_t row, size_t attribute) const {
    return schema_.attribute(attribute).values()[this->row(row)[attribute]];
  }

  // Multiplicity of every value tuple that occurs in the table. Counts sum to
  // record_count().
  std::map<ValueTuple, size_t> Multiplicities() const;

  friend bool operator==(const Table&, const Table&) = default;

 private:
  Table(TableSchema schema, std::vector<uint32_t> codes)
      : schema_(std::move(schema)), codes_(std::move(codes)) {}

  TableSchema schema_;
  // Row-major, attribute_count() codes per record.
  std::vector<uint32_t> codes_;
};

// CSV ingestion. Comma separated, RFC 4180 double-quote escaping, no type
// inference. The header must name the schema attributes in schema order.
//
// Errors:
//   "empty input"      - no header line
//   "column mismatch"  - header differs from schema, or a ragged row
//   "unknown value"    - a cell label outside its attribute domain
absl::StatusOr<Table> LoadTable(std::istream& csv, const TableSchema& schema);
absl::StatusOr<Table> LoadTableFile(const std::string& path,
                                    const TableSchema& schema);

// Writes the header and rows. Fields are quoted only when needed.
void EmitTable(const Table& table, std::ostream& out);
absl::Status EmitTableFile(const Table& table, const std::string& path);

// Low-level CSV record splitter exposed for tests: parses every record of
// `text` into fields.
absl::StatusOr<std::vector<std::vector<std::string>>> ParseCsv(
    std::string_view text);
std::string EscapeCsvField(std::string_view field);

}  // namespace pkpram

#endif  // PKPRAM_TABULAR_H_
