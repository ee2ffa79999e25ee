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

#include "pkpram/tabular.h"

#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "pkpram/status_macros.h"

namespace pkpram {

absl::StatusOr<AttributeSchema> AttributeSchema::Create(
    std::string name, std::vector<std::string> values) {
  if (values.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("attribute '", name, "' has an empty domain"));
  }
  std::set<std::string_view> seen;
  for (const std::string& value : values) {
    if (!seen.insert(value).second) {
      return absl::InvalidArgumentError(absl::StrCat(
          "attribute '", name, "' has duplicate value '", value, "'"));
    }
  }
  return AttributeSchema(std::move(name), std::move(values));
}

absl::StatusOr<uint32_t> AttributeSchema::IndexOf(
    std::string_view label) const {
  for (size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] == label) return static_cast<uint32_t>(i);
  }
  return absl::NotFoundError(
      absl::StrCat("'", std::string(label), "' is not in the domain of '", name_, "'"));
}

absl::StatusOr<TableSchema> TableSchema::Create(
    std::vector<AttributeSchema> attributes) {
  if (attributes.empty()) {
    return absl::InvalidArgumentError("schema has no attributes");
  }
  std::set<std::string_view> seen;
  for (const AttributeSchema& attribute : attributes) {
    if (!seen.insert(attribute.name()).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate attribute name '", attribute.name(), "'"));
    }
  }
  return TableSchema(std::move(attributes));
}

std::vector<size_t> TableSchema::DomainSizes() const {
  std::vector<size_t> sizes;
  sizes.reserve(attributes_.size());
  for (const AttributeSchema& a : attributes_) sizes.push_back(a.domain_size());
  return sizes;
}

double TableSchema::TotalDomainSize() const {
  double total = 1.0;
  for (const AttributeSchema& a : attributes_) total *= a.domain_size();
  return total;
}

absl::StatusOr<size_t> TableSchema::AttributeIndex(std::string_view name) const {
  for (size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].name() == name) return i;
  }
  return absl::NotFoundError(absl::StrCat("unknown attribute '", std::string(name), "'"));
}

absl::StatusOr<TableSchema> TableSchema::Select(
    std::span<const size_t> positions) const {
  std::vector<AttributeSchema> selected;
  for (size_t p : positions) {
    if (p >= attributes_.size()) {
      return absl::OutOfRangeError(
          absl::StrCat("attribute position ", p, " out of range"));
    }
    selected.push_back(attributes_[p]);
  }
  return TableSchema::Create(std::move(selected));
}

std::vector<std::string> TableSchema::AttributeNames() const {
  std::vector<std::string> names;
  for (const AttributeSchema& a : attributes_) names.push_back(a.name());
  return names;
}

absl::StatusOr<TableSchema> AnonymousSchema(std::span<const size_t> domains) {
  std::vector<AttributeSchema> attributes;
  for (size_t i = 0; i < domains.size(); ++i) {
    std::vector<std::string> labels;
    for (size_t v = 0; v < domains[i]; ++v) labels.push_back(absl::StrCat(v));
    PKPRAM_ASSIGN_OR_RETURN(
        AttributeSchema attribute,
        AttributeSchema::Create(absl::StrCat("a", i), std::move(labels)));
    attributes.push_back(std::move(attribute));
  }
  return TableSchema::Create(std::move(attributes));
}

absl::StatusOr<Table> Table::FromLabels(
    TableSchema schema, const std::vector<std::vector<std::string>>& rows) {
  const size_t width = schema.attribute_count();
  std::vector<uint32_t> codes;
  codes.reserve(rows.size() * width);
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      return absl::InvalidArgumentError(
          absl::StrCat("column mismatch: row ", r, " has ", rows[r].size(),
                       " fields, expected ", width));
    }
    for (size_t a = 0; a < width; ++a) {
      absl::StatusOr<uint32_t> index = schema.attribute(a).IndexOf(rows[r][a]);
      if (!index.ok()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "unknown value at row ", r, ", column '",
            schema.attribute(a).name(), "': '", rows[r][a], "'"));
      }
      codes.push_back(*index);
    }
  }
  return Table(std::move(schema), std::move(codes));
}

absl::StatusOr<Table> Table::FromTuples(TableSchema schema,
                                        const std::vector<ValueTuple>& rows) {
  const size_t width = schema.attribute_count();
  std::vector<uint32_t> codes;
  codes.reserve(rows.size() * width);
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      return absl::InvalidArgumentError(absl::StrCat(
          "column mismatch: tuple ", r, " has ", rows[r].size(),
          " entries, expected ", width));
    }
    for (size_t a = 0; a < width; ++a) {
      if (rows[r][a] >= schema.attribute(a).domain_size()) {
        return absl::InvalidArgumentError(
            absl::StrCat("unknown value at row ", r, ", column '",
                         schema.attribute(a).name(), "': index ", rows[r][a]));
      }
      codes.push_back(rows[r][a]);
    }
  }
  return Table(std::move(schema), std::move(codes));
}

absl::StatusOr<ValueTuple> Table::value_index(size_t r) const {
  if (r >= record_count()) {
    return absl::OutOfRangeError(absl::StrCat(
        "row ", r, " out of range (table has ", record_count(), " rows)"));
  }
  std::span<const uint32_t> view = row(r);
  return ValueTuple(view.begin(), view.end());
}

std::map<ValueTuple, size_t> Table::Multiplicities() const {
  std::map<ValueTuple, size_t> counts;
  for (size_t r = 0; r < record_count(); ++r) {
    std::span<const uint32_t> view = row(r);
    ++counts[ValueTuple(view.begin(), view.end())];
  }
  return counts;
}

absl::StatusOr<std::vector<std::vector<std::string>>> ParseCsv(
    std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  size_t i = 0;
  size_t line = 1;
  const size_t n = text.size();
  while (i < n) {
    if (text[i] == '"') {
      ++i;
      while (true) {
        if (i >= n) {
          return absl::InvalidArgumentError(
              absl::StrCat("malformed csv: unterminated quote on line ", line));
        }
        if (text[i] == '"') {
          if (i + 1 < n && text[i + 1] == '"') {
            field.push_back('"');
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        if (text[i] == '\n') ++line;
        field.push_back(text[i++]);
      }
      if (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
        return absl::InvalidArgumentError(absl::StrCat(
            "malformed csv: text after closing quote on line ", line));
      }
      continue;
    }
    const char c = text[i];
    if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      ++i;
    } else if (c == '\n' || c == '\r') {
      record.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(record));
      record.clear();
      i += (c == '\r' && i + 1 < n && text[i + 1] == '\n') ? 2 : 1;
      ++line;
    } else {
      field.push_back(c);
      ++i;
    }
  }
  // A final record without a trailing newline.
  if (!field.empty() || !record.empty() ||
      (n > 0 && text[n - 1] == '"')) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

std::string EscapeCsvField(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos &&
      !field.empty()) {
    return std::string(field);
  }
  if (field.empty()) return "";
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

absl::StatusOr<Table> LoadTable(std::istream& csv, const TableSchema& schema) {
  const std::string text((std::istreambuf_iterator<char>(csv)),
                         std::istreambuf_iterator<char>());
  PKPRAM_ASSIGN_OR_RETURN(std::vector<std::vector<std::string>> records,
                          ParseCsv(text));
  if (records.empty()) {
    return absl::InvalidArgumentError("empty input: no header row");
  }
  const std::vector<std::string> expected = schema.AttributeNames();
  if (records.front() != expected) {
    return absl::InvalidArgumentError(absl::StrCat(
        "column mismatch: header [", absl::StrJoin(records.front(), ","),
        "] does not match schema [", absl::StrJoin(expected, ","), "]"));
  }
  records.erase(records.begin());
  return Table::FromLabels(schema, records);
}

absl::StatusOr<Table> LoadTableFile(const std::string& path,
                                    const TableSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  return LoadTable(in, schema);
}

void EmitTable(const Table& table, std::ostream& out) {
  const TableSchema& schema = table.schema();
  for (size_t a = 0; a < schema.attribute_count(); ++a) {
    if (a > 0) out << ',';
    out << EscapeCsvField(schema.attribute(a).name());
  }
  out << '\n';
  for (size_t r = 0; r < table.record_count(); ++r) {
    for (size_t a = 0; a < schema.attribute_count(); ++a) {
      if (a > 0) out << ',';
      out << EscapeCsvField(table.label(r, a));
    }
    out << '\n';
  }
}

absl::Status EmitTableFile(const Table& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  EmitTable(table, out);
  out.flush();
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

}  // namespace pkpram
