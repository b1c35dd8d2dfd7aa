// Copyright 2026 The foodframe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <sstream>

#include "foodframe/csv.h"
#include "foodframe/error.h"
#include "foodframe/text.h"

namespace foodframe {
namespace {

TEST(TextTest, CollapseAndCount) {
  EXPECT_EQ(CollapseWhitespace("  a \t b\n\nc  "), "a b c");
  EXPECT_EQ(CountWhitespaceTokens("  The food  was\tgreat .\n"), 5u);
  EXPECT_EQ(CountWhitespaceTokens("   "), 0u);
}

TEST(TextTest, Utf8Validation) {
  EXPECT_TRUE(IsValidUtf8("caf\xc3\xa9"));
  EXPECT_FALSE(IsValidUtf8("caf\xc3"));
  EXPECT_FALSE(IsValidUtf8("\xff\xfe"));
}

TEST(TextTest, ListReaderSkipsCommentsAndBlanks) {
  std::istringstream in("# header\nalpha\n\n  beta  # trailing\n#gamma\n");
  EXPECT_EQ(ReadList(in), (std::vector<std::string>{"alpha", "beta"}));
}

TEST(TextTest, BadPatternIsConfigError) {
  EXPECT_THROW(CompilePatterns({"ok", "(unclosed"}), ConfigError);
  const auto p = CompilePatterns({"out of state"});
  EXPECT_TRUE(AnyMatch(p, "I'm from OUT OF STATE"));
}

TEST(CsvTest, RoundTripQuoting) {
  std::ostringstream out;
  CsvWriter w(out);
  w.WriteRow({"id", "text"});
  w.WriteRow({"a", "has, comma"});
  w.WriteRow({"b", "has \"quote\"\nand newline"});
  std::istringstream in(out.str());
  const CsvTable t = CsvTable::Read(in);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t.rows()[0][t.Column("text")], "has, comma");
  EXPECT_EQ(t.rows()[1][1], "has \"quote\"\nand newline");
  EXPECT_THROW(t.Column("missing"), InputError);
}

TEST(CsvTest, FormatDoubleRoundTrips) {
  const double v = 0.1 + 0.2;
  EXPECT_EQ(std::stod(FormatDouble(v)), v);
  EXPECT_EQ(FormatDouble(std::numeric_limits<double>::infinity()), "inf");
}

}  // namespace
}  // namespace foodframe
