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

#ifndef PKPRAM_FILE_FORMATS_H_
#define PKPRAM_FILE_FORMATS_H_

#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "pkpram/tabular.h"
#include "pkpram/transition.h"

// JSON documents read and written by the tool. Unknown keys are rejected.
//
// Schema:
//   {"attributes": [{"name": "sex", "values": ["male", "female"]}, ...]}
//
// Single matrix ("attribute" optional):
//   {"attribute": "sex", "domain": ["male", "female"],
//    "rows": [[0.75, 0.25], [0.25, 0.75]]}
//
// Matrix set:
//   {"matrices": [<single matrix>, ...]}
//
// Rows must sum to 1 within kMatrixFileTolerance.

namespace pkpram {

inline constexpr int kFormatVersion = 1;
inline constexpr double kMatrixFileTolerance = 1e-9;

absl::StatusOr<TableSchema> ParseSchemaJson(std::string_view text);
absl::StatusOr<TableSchema> LoadSchemaFile(const std::string& path);
std::string SchemaToJson(const TableSchema& schema);

// Accepts either a single matrix or a matrix set. Attributes without a name
// are called a0, a1, ...
absl::StatusOr<AttributeMatrixSet> ParseMatrixSetJson(std::string_view text);
absl::StatusOr<AttributeMatrixSet> LoadMatrixSetFile(const std::string& path);
std::string MatrixSetToJson(const AttributeMatrixSet& set);

absl::StatusOr<std::string> ReadFile(const std::string& path);

}  // namespace pkpram

#endif  // PKPRAM_FILE_FORMATS_H_
