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

#include <string>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "testing/status_matchers.h"

namespace pkpram {
namespace {

using ::pkpram::testing::IsOk;
using ::pkpram::testing::StatusIs;
using ::testing::ElementsAre;

TEST(SchemaJsonTest, ParsesAttributesInOrder) {
  auto schema = ParseSchemaJson(R"({"attributes": [
      {"name": "sex", "values": ["male", "female"]},
      {"name": "age", "values": ["20s", "30s", "40s"]}]})");
  ASSERT_THAT(schema, IsOk());
  EXPECT_THAT(schema->AttributeNames(), ElementsAre("sex", "age"));
  EXPECT_THAT(schema->DomainSizes(), ElementsAre(2, 3));
}

TEST(SchemaJsonTest, RoundTrips) {
  auto schema = ParseSchemaJson(
      R"({"attributes": [{"name": "x", "values": ["a", "b,c"]}]})");
  ASSERT_THAT(schema, IsOk());
  auto again = ParseSchemaJson(SchemaToJson(*schema));
  ASSERT_THAT(again, IsOk());
  EXPECT_EQ(*again, *schema);
}

TEST(SchemaJsonTest, RejectsUnknownKeysAndBadShapes) {
  EXPECT_THAT(ParseSchemaJson(R"({"attributes": [], "extra": 1})"),
              StatusIs(absl::StatusCode::kInvalidArgument, "unknown key"));
  EXPECT_THAT(ParseSchemaJson(R"({"attributes": [{"name": "x"}]})"),
              StatusIs(absl::StatusCode::kInvalidArgument, "required"));
  EXPECT_THAT(ParseSchemaJson("{"),
              StatusIs(absl::StatusCode::kInvalidArgument, "malformed JSON"));
  EXPECT_THAT(ParseSchemaJson(R"({"attributes": [{"name": "x", "values": [1]}]})"),
              StatusIs(absl::StatusCode::kInvalidArgument, "array of strings"));
}

TEST(MatrixJsonTest, SingleMatrixGetsDefaultName) {
  auto set = ParseMatrixSetJson(
      R"({"domain": ["a", "b"], "rows": [[0.75, 0.25], [0.25, 0.75]]})");
  ASSERT_THAT(set, IsOk());
  EXPECT_THAT(set->schema().AttributeNames(), ElementsAre("a0"));
  EXPECT_DOUBLE_EQ(set->matrix(0)(1, 0), 0.25);
}

TEST(MatrixJsonTest, MatrixListWithNames) {
  auto set = ParseMatrixSetJson(R"({"matrices": [
      {"attribute": "sex", "domain": ["m", "f"], "rows": [[1, 0], [0, 1]]},
      {"domain": ["x", "y", "z"],
       "rows": [[0.5, 0.25, 0.25], [0.25, 0.5, 0.25], [0.25, 0.25, 0.5]]}]})");
  ASSERT_THAT(set, IsOk());
  EXPECT_THAT(set->schema().AttributeNames(), ElementsAre("sex", "a1"));
}

TEST(MatrixJsonTest, RowSumToleranceIsLooser) {
  EXPECT_THAT(ParseMatrixSetJson(
                  R"({"domain": ["a", "b"], "rows": [[0.7500000001, 0.25], [0.25, 0.75]]})"),
              IsOk());
  EXPECT_THAT(ParseMatrixSetJson(
                  R"({"domain": ["a", "b"], "rows": [[0.6, 0.5], [0.25, 0.75]]})"),
              StatusIs(absl::StatusCode::kInvalidArgument, "row-sum violation"));
}

TEST(MatrixJsonTest, RowCountMustMatchDomain) {
  EXPECT_THAT(ParseMatrixSetJson(R"({"domain": ["a", "b", "c"], "rows": [[1, 0], [0, 1]]})"),
              StatusIs(absl::StatusCode::kInvalidArgument, "rows for a domain"));
  EXPECT_THAT(ParseMatrixSetJson(R"({"domain": ["a"], "rows": [[1]], "rho": 1})"),
              StatusIs(absl::StatusCode::kInvalidArgument, "unknown key"));
}

TEST(MatrixJsonTest, RoundTrips) {
  auto set = ParseMatrixSetJson(R"({"matrices": [
      {"attribute": "s", "domain": ["m", "f"], "rows": [[0.6, 0.4], [0.1, 0.9]]}]})");
  ASSERT_THAT(set, IsOk());
  auto again = ParseMatrixSetJson(MatrixSetToJson(*set));
  ASSERT_THAT(again, IsOk());
  EXPECT_EQ(again->schema(), set->schema());
  EXPECT_EQ(again->matrix(0), set->matrix(0));
}

TEST(ReadFileTest, MissingFile) {
  EXPECT_THAT(ReadFile("/nonexistent/pkpram/file"),
              StatusIs(absl::StatusCode::kNotFound, "cannot open"));
}

}  // namespace
}  // namespace pkpram
