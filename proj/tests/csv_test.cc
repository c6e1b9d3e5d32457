// Copyright 2026 The PF-TS Authors
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

#include "pfts/csv.h"

#include <sstream>

#include <gtest/gtest.h>

#include "test_util.h"

namespace pfts {
namespace {

using ::pfts::testing::ExpectErrorCode;

TEST(CsvTest, ReadsHeaderAndRows) {
  std::istringstream in("\xEF\xBB\xBF" "a,b\r\n1,2\r\n\r\n3,4\n");
  const CsvTable t = ReadCsv(in);
  ASSERT_EQ(t.header.size(), 2u);
  EXPECT_EQ(t.header[0], "a");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[1][1], "4");
  EXPECT_EQ(t.Column("b"), 1u);
}

TEST(CsvTest, QuotedFields) {
  std::istringstream in("name,v\n\"x, \"\"y\"\"\",1\n");
  const CsvTable t = ReadCsv(in);
  EXPECT_EQ(t.rows[0][0], "x, \"y\"");
}

TEST(CsvTest, Errors) {
  std::istringstream ragged("a,b\n1\n");
  const std::string msg =
      ExpectErrorCode([&] { ReadCsv(ragged); }, ErrorCode::kParseError);
  EXPECT_NE(msg.find("line 2"), std::string::npos);

  std::istringstream unterminated("a\n\"x\n");
  ExpectErrorCode([&] { ReadCsv(unterminated); }, ErrorCode::kParseError);

  std::istringstream empty("");
  ExpectErrorCode([&] { ReadCsv(empty); }, ErrorCode::kEmptyData);

  std::istringstream in("a\n1\n");
  const CsvTable t = ReadCsv(in);
  ExpectErrorCode([&] { t.Column("zz"); }, ErrorCode::kParseError);
  ExpectErrorCode([] { ReadCsvFile("/nonexistent.csv"); }, ErrorCode::kIo);
}

TEST(CsvTest, ParseNumber) {
  EXPECT_EQ(ParseNumber("2.5", 1, "c"), 2.5);
  EXPECT_EQ(ParseNumber("-1e3", 1, "c"), -1000.0);
  ExpectErrorCode([] { ParseNumber("", 3, "c"); }, ErrorCode::kNonNumeric);
  ExpectErrorCode([] { ParseNumber("1.5x", 3, "c"); }, ErrorCode::kNonNumeric);
  ExpectErrorCode([] { ParseNumber("1e999", 3, "c"); }, ErrorCode::kNonNumeric);
}

}  // namespace
}  // namespace pfts
