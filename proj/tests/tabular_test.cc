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

#include <sstream>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "testing/status_matchers.h"

namespace pkpram {
namespace {

using ::pkpram::testing::IsOk;
using ::pkpram::testing::StatusIs;
using ::testing::ElementsAre;

TableSchema SexAge() {
  auto sex = AttributeSchema::Create("sex", {"male", "female"});
  auto age = AttributeSchema::Create("age", {"20s", "30s", "40s"});
  return *TableSchema::Create({*sex, *age});
}

TEST(AttributeSchemaTest, RejectsEmptyAndDuplicateDomains) {
  EXPECT_THAT(AttributeSchema::Create("x", {}),
              StatusIs(absl::StatusCode::kInvalidArgument, "empty domain"));
  EXPECT_THAT(AttributeSchema::Create("x", {"a", "a"}),
              StatusIs(absl::StatusCode::kInvalidArgument, "duplicate value"));
}

TEST(AttributeSchemaTest, IndexOfFollowsDeclarationOrder) {
  auto age = AttributeSchema::Create("age", {"20s", "30s", "40s"});
  ASSERT_THAT(age, IsOk());
  EXPECT_EQ(*age->IndexOf("30s"), 1u);
  EXPECT_THAT(age->IndexOf("50s"), StatusIs(absl::StatusCode::kNotFound, "50s"));
}

TEST(TableSchemaTest, RejectsDuplicateNames) {
  auto a = AttributeSchema::Create("a", {"0"});
  EXPECT_THAT(TableSchema::Create({*a, *a}),
              StatusIs(absl::StatusCode::kInvalidArgument, "duplicate attribute"));
  EXPECT_THAT(TableSchema::Create({}),
              StatusIs(absl::StatusCode::kInvalidArgument, "no attributes"));
}

TEST(TableSchemaTest, DomainSizesAndSelect) {
  const TableSchema schema = SexAge();
  EXPECT_THAT(schema.DomainSizes(), ElementsAre(2, 3));
  EXPECT_EQ(schema.TotalDomainSize(), 6.0);
  const size_t positions[] = {1};
  auto age_only = schema.Select(positions);
  ASSERT_THAT(age_only, IsOk());
  EXPECT_THAT(age_only->AttributeNames(), ElementsAre("age"));
}

TEST(TableTest, ValueIndexUsesDeclarationOrder) {
  auto table = Table::FromLabels(SexAge(), {{"female", "30s"}});
  ASSERT_THAT(table, IsOk());
  EXPECT_THAT(*table->value_index(0), ElementsAre(1, 1));
}

TEST(TableTest, ValueIndexOutOfRange) {
  auto table = Table::FromLabels(SexAge(), {{"female", "30s"}});
  ASSERT_THAT(table, IsOk());
  EXPECT_THAT(table->value_index(1),
              StatusIs(absl::StatusCode::kOutOfRange, "out of range"));
}

TEST(TableTest, FromLabelsRejectsUnknownValue) {
  EXPECT_THAT(Table::FromLabels(SexAge(), {{"other", "30s"}}),
              StatusIs(absl::StatusCode::kInvalidArgument, "unknown value"));
}

TEST(TableTest, MultiplicitiesCountDistinctTuples) {
  auto table = Table::FromLabels(
      SexAge(), {{"male", "20s"}, {"male", "20s"}, {"female", "40s"}});
  ASSERT_THAT(table, IsOk());
  const auto counts = table->Multiplicities();
  ASSERT_EQ(counts.size(), 2u);
  EXPECT_EQ(counts.at(ValueTuple{0, 0}), 2u);
  EXPECT_EQ(counts.at(ValueTuple{1, 2}), 1u);
}

TEST(CsvTest, ParsesQuotedFieldsAndCrlf) {
  auto rows = ParseCsv("a,b\r\n\"x,1\",\"say \"\"hi\"\"\"\r\n");
  ASSERT_THAT(rows, IsOk());
  ASSERT_EQ(rows->size(), 2u);
  EXPECT_THAT((*rows)[1], ElementsAre("x,1", "say \"hi\""));
}

TEST(CsvTest, RejectsUnterminatedQuote) {
  EXPECT_THAT(ParseCsv("a\n\"open\n"),
              StatusIs(absl::StatusCode::kInvalidArgument, "malformed csv"));
}

TEST(CsvTest, EscapeRoundTrips) {
  EXPECT_EQ(EscapeCsvField("plain"), "plain");
  EXPECT_EQ(EscapeCsvField("a,b"), "\"a,b\"");
  EXPECT_EQ(EscapeCsvField("q\""), "\"q\"\"\"");
}

TEST(LoadTableTest, LoadsRowsAndStripsBom) {
  std::istringstream in("\xEF\xBB\xBFsex,age\nmale,20s\nfemale,40s\n");
  auto table = LoadTable(in, SexAge());
  ASSERT_THAT(table, IsOk());
  EXPECT_EQ(table->record_count(), 2u);
  EXPECT_EQ(table->label(1, 1), "40s");
}

TEST(LoadTableTest, UnknownValueIsReported) {
  std::istringstream in("sex,age\nmale,20s\nother,40s\n");
  EXPECT_THAT(LoadTable(in, SexAge()),
              StatusIs(absl::StatusCode::kInvalidArgument, "unknown value"));
}

TEST(LoadTableTest, ReorderedColumnsAreAColumnMismatch) {
  std::istringstream in("age,sex\n20s,male\n");
  EXPECT_THAT(LoadTable(in, SexAge()),
              StatusIs(absl::StatusCode::kInvalidArgument, "column mismatch"));
}

TEST(LoadTableTest, RaggedRowIsAColumnMismatch) {
  std::istringstream in("sex,age\nmale\n");
  EXPECT_THAT(LoadTable(in, SexAge()),
              StatusIs(absl::StatusCode::kInvalidArgument, "column mismatch"));
}

TEST(LoadTableTest, EmptyInput) {
  std::istringstream in("");
  EXPECT_THAT(LoadTable(in, SexAge()),
              StatusIs(absl::StatusCode::kInvalidArgument, "empty input"));
}

TEST(LoadTableTest, HeaderOnlyGivesEmptyTable) {
  std::istringstream in("sex,age\n");
  auto table = LoadTable(in, SexAge());
  ASSERT_THAT(table, IsOk());
  EXPECT_EQ(table->record_count(), 0u);
}

TEST(EmitTableTest, RoundTripsThroughLoad) {
  auto table = Table::FromLabels(SexAge(), {{"male", "20s"}, {"female", "40s"}});
  ASSERT_THAT(table, IsOk());
  std::ostringstream out;
  EmitTable(*table, out);
  std::istringstream in(out.str());
  auto reloaded = LoadTable(in, SexAge());
  ASSERT_THAT(reloaded, IsOk());
  EXPECT_EQ(*reloaded, *table);
}

}  // namespace
}  // namespace pkpram
