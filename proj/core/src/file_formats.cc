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

#include "pkpram/file_formats.h"

#include <fstream>
#include <iterator>
#include <set>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "pkpram/status_macros.h"

namespace pkpram {
namespace {

using nlohmann::json;

absl::Status RejectUnknownKeys(const json& object,
                               const std::set<std::string>& allowed,
                               const char* where) {
  if (!object.is_object()) {
    return absl::InvalidArgumentError(
        absl::StrCat(where, ": expected a JSON object"));
  }
  for (const auto& item : object.items()) {
    if (!allowed.contains(item.key())) {
      return absl::InvalidArgumentError(
          absl::StrCat(where, ": unknown key '", item.key(), "'"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<json> ParseJson(std::string_view text) {
  json doc = json::parse(text.begin(), text.end(), nullptr,
                         /*allow_exceptions=*/false);
  if (doc.is_discarded()) return absl::InvalidArgumentError("malformed JSON");
  return doc;
}

absl::StatusOr<std::vector<std::string>> StringList(const json& node,
                                                    const char* where) {
  if (!node.is_array()) {
    return absl::InvalidArgumentError(
        absl::StrCat(where, ": expected an array of strings"));
  }
  std::vector<std::string> out;
  for (const json& item : node) {
    if (!item.is_string()) {
      return absl::InvalidArgumentError(
          absl::StrCat(where, ": expected an array of strings"));
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

struct ParsedMatrix {
  std::string attribute;
  AttributeSchema schema;
  TransitionMatrix matrix;
};

absl::StatusOr<ParsedMatrix> ParseOneMatrix(const json& node, size_t position) {
  PKPRAM_RETURN_IF_ERROR(
      RejectUnknownKeys(node, {"attribute", "domain", "rows"}, "matrix"));
  std::string name = absl::StrCat("a", position);
  if (node.contains("attribute")) {
    if (!node["attribute"].is_string()) {
      return absl::InvalidArgumentError("matrix: 'attribute' must be a string");
    }
    name = node["attribute"].get<std::string>();
  }
  if (!node.contains("domain") || !node.contains("rows")) {
    return absl::InvalidArgumentError("matrix: 'domain' and 'rows' required");
  }
  PKPRAM_ASSIGN_OR_RETURN(std::vector<std::string> labels,
                          StringList(node["domain"], "matrix.domain"));
  PKPRAM_ASSIGN_OR_RETURN(AttributeSchema attribute,
                          AttributeSchema::Create(name, std::move(labels)));
  const json& rows_node = node["rows"];
  if (!rows_node.is_array()) {
    return absl::InvalidArgumentError("matrix.rows: expected array of arrays");
  }
  std::vector<std::vector<double>> rows;
  for (const json& row : rows_node) {
    if (!row.is_array()) {
      return absl::InvalidArgumentError("matrix.rows: expected array of arrays");
    }
    std::vector<double> values;
    for (const json& p : row) {
      if (!p.is_number()) {
        return absl::InvalidArgumentError("matrix.rows: entries must be numbers");
      }
      values.push_back(p.get<double>());
    }
    rows.push_back(std::move(values));
  }
  if (rows.size() != attribute.domain_size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "matrix '", name, "': ", rows.size(), " rows for a domain of ",
        attribute.domain_size(), " values"));
  }
  PKPRAM_ASSIGN_OR_RETURN(TransitionMatrix matrix,
                          TransitionMatrix::FromRows(rows, kMatrixFileTolerance));
  return ParsedMatrix{name, std::move(attribute), std::move(matrix)};
}

json MatrixToJson(const AttributeSchema& attribute,
                  const TransitionMatrix& matrix) {
  json node;
  node["attribute"] = attribute.name();
  node["domain"] = attribute.values();
  node["rows"] = matrix.Rows();
  return node;
}

}  // namespace

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

absl::StatusOr<TableSchema> ParseSchemaJson(std::string_view text) {
  PKPRAM_ASSIGN_OR_RETURN(json doc, ParseJson(text));
  PKPRAM_RETURN_IF_ERROR(RejectUnknownKeys(doc, {"attributes"}, "schema"));
  if (!doc.contains("attributes") || !doc["attributes"].is_array()) {
    return absl::InvalidArgumentError("schema: 'attributes' array required");
  }
  std::vector<AttributeSchema> attributes;
  for (const json& node : doc["attributes"]) {
    PKPRAM_RETURN_IF_ERROR(
        RejectUnknownKeys(node, {"name", "values"}, "schema attribute"));
    if (!node.contains("name") || !node["name"].is_string() ||
        !node.contains("values")) {
      return absl::InvalidArgumentError(
          "schema attribute: 'name' (string) and 'values' required");
    }
    PKPRAM_ASSIGN_OR_RETURN(std::vector<std::string> values,
                            StringList(node["values"], "schema values"));
    PKPRAM_ASSIGN_OR_RETURN(
        AttributeSchema attribute,
        AttributeSchema::Create(node["name"].get<std::string>(),
                                std::move(values)));
    attributes.push_back(std::move(attribute));
  }
  return TableSchema::Create(std::move(attributes));
}

absl::StatusOr<TableSchema> LoadSchemaFile(const std::string& path) {
  PKPRAM_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  return ParseSchemaJson(text);
}

std::string SchemaToJson(const TableSchema& schema) {
  json doc;
  doc["attributes"] = json::array();
  for (const AttributeSchema& a : schema.attributes()) {
    doc["attributes"].push_back({{"name", a.name()}, {"values", a.values()}});
  }
  return doc.dump(2) + "\n";
}

absl::StatusOr<AttributeMatrixSet> ParseMatrixSetJson(std::string_view text) {
  PKPRAM_ASSIGN_OR_RETURN(json doc, ParseJson(text));
  std::vector<ParsedMatrix> parsed;
  if (doc.is_object() && doc.contains("matrices")) {
    PKPRAM_RETURN_IF_ERROR(RejectUnknownKeys(doc, {"matrices"}, "matrix set"));
    if (!doc["matrices"].is_array() || doc["matrices"].empty()) {
      return absl::InvalidArgumentError(
          "matrix set: 'matrices' must be a non-empty array");
    }
    for (size_t i = 0; i < doc["matrices"].size(); ++i) {
      PKPRAM_ASSIGN_OR_RETURN(ParsedMatrix m,
                              ParseOneMatrix(doc["matrices"][i], i));
      parsed.push_back(std::move(m));
    }
  } else {
    PKPRAM_ASSIGN_OR_RETURN(ParsedMatrix m, ParseOneMatrix(doc, 0));
    parsed.push_back(std::move(m));
  }
  std::vector<AttributeSchema> attributes;
  std::vector<TransitionMatrix> matrices;
  for (ParsedMatrix& m : parsed) {
    attributes.push_back(std::move(m.schema));
    matrices.push_back(std::move(m.matrix));
  }
  PKPRAM_ASSIGN_OR_RETURN(TableSchema schema,
                          TableSchema::Create(std::move(attributes)));
  return AttributeMatrixSet::Create(std::move(schema), std::move(matrices));
}

absl::StatusOr<AttributeMatrixSet> LoadMatrixSetFile(const std::string& path) {
  PKPRAM_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  return ParseMatrixSetJson(text);
}

std::string MatrixSetToJson(const AttributeMatrixSet& set) {
  json doc;
  doc["matrices"] = json::array();
  for (size_t a = 0; a < set.attribute_count(); ++a) {
    doc["matrices"].push_back(
        MatrixToJson(set.schema().attribute(a), set.matrix(a)));
  }
  return doc.dump(2) + "\n";
}

}  // namespace pkpram
