// Copyright 2026 The fgaudit Authors
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

#include "fgaudit/io.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "fgaudit/errors.h"
#include "test_support.h"

namespace fgaudit {
namespace {

using testing::data_path;
using testing::dataset_from_csv;
using testing::simple_config;
using testing::table_from_csv;

TEST(ConfigTest, ParsesEveryKey) {
  SchemaConfig c = parse_schema_config(R"({
    "qi_attributes": ["Age", "Sex"],
    "sensitive_attribute": "Education",
    "sensitive_value_set": ["1st-4th", "5th-6th"],
    "missing_marker": "?",
    "bin_widths": {"Age": 10}
  })");
  EXPECT_EQ(c.qi_attributes, (std::vector<std::string>{"Age", "Sex"}));
  EXPECT_EQ(c.sensitive_attribute, "Education");
  EXPECT_EQ(c.sensitive_values.size(), 2u);
  EXPECT_EQ(c.missing_marker, "?");
  EXPECT_DOUBLE_EQ(c.bin_widths.at("Age"), 10.0);
}

TEST(ConfigTest, SingleValueAndErrors) {
  EXPECT_EQ(parse_schema_config(R"({"sensitive_value_set": "x"})").sensitive_values,
            (std::vector<std::string>{"x"}));
  EXPECT_THROW(parse_schema_config("{"), ParseError);
  EXPECT_THROW(parse_schema_config(R"({"qi_attributes": 3})"), ParseError);
  EXPECT_THROW(load_schema_config("/nonexistent/config.json"), ParseError);
}

TEST(ConfigTest, LoadsFixture) {
  SchemaConfig c = load_schema_config(data_path("newton_config.json"));
  EXPECT_EQ(c.qi_attributes, (std::vector<std::string>{"A"}));
  EXPECT_EQ(c.sensitive_values, (std::vector<std::string>{"x"}));
}

TEST(BinTest, Labels) {
  EXPECT_EQ(bin_label(37, 10), "30-40");
  EXPECT_EQ(bin_label(40, 10), "40-50");
  EXPECT_EQ(bin_label(2.5, 0.5), "2.5-3");
}

TEST(ReadTableTest, RawExampleInFileOrder) {
  Table t = table_from_csv("A,X\ns1,x\ns1,x\ns1,y\ns2,y\ns2,z\ns2,z\n",
                           simple_config({"A"}));
  ASSERT_EQ(t.size(), 6u);
  EXPECT_EQ(t.row(2), (Row{"s1", "y"}));
  EXPECT_EQ(t.sensitive_value(0), "x");
}

TEST(ReadTableTest, HeaderOnlyIsEmpty) {
  try {
    table_from_csv("A,X\n", simple_config({"A"}));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("empty file"), std::string::npos);
  }
  EXPECT_THROW(table_from_csv("", simple_config({"A"})), ParseError);
}

TEST(ReadTableTest, RaggedRowReportsLine) {
  try {
    table_from_csv("A,X\ns1,x\ns2\n", simple_config({"A"}));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("ragged row at line 3"), std::string::npos)
        << e.what();
  }
}

TEST(ReadTableTest, MissingAttributeOrTargetValue) {
  EXPECT_THROW(table_from_csv("A,X\ns1,x\n", simple_config({"B"})), SchemaError);
  EXPECT_THROW(table_from_csv("A,X\ns1,y\n", simple_config({"A"})), SchemaError);
}

TEST(ReadTableTest, DropsMissingAndBins) {
  SchemaConfig c = simple_config({"Age", "A"});
  c.missing_marker = "?";
  c.bin_widths["Age"] = 10;
  Table t = table_from_csv("Age,A,X\n37,s1,x\n?,s1,y\n41,?,y\n52,s2,y\n", c);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t.row(0)[0], "30-40");
  EXPECT_EQ(t.row(1)[0], "50-60");
  c.bin_widths["Age"] = 0;
  EXPECT_THROW(table_from_csv("Age,A,X\n37,s1,x\n", c), SchemaError);
  c.bin_widths["Age"] = 10;
  EXPECT_THROW(table_from_csv("Age,A,X\nold,s1,x\n", c), ParseError);
}

TEST(ReadTableTest, QuotedFields) {
  Table t = table_from_csv("A,X\n\"s, 1\",x\n", simple_config({"A"}));
  EXPECT_EQ(t.row(0)[0], "s, 1");
}

TEST(AnonymizedTest, LoadsNewtonFixture) {
  AnonymizedDataset ds = load_anonymized(data_path("newton_qi.csv"),
                                         data_path("newton_sensitive.csv"),
                                         load_schema_config(data_path("newton_config.json")));
  ASSERT_EQ(ds.groups().size(), 3u);
  for (const AGroup& g : ds.groups()) EXPECT_EQ(g.size(), 2u);
  EXPECT_EQ(ds.groups()[0].members, (std::vector<RowId>{0, 1}));
}

TEST(AnonymizedTest, GidInOneFileOnly) {
  const SchemaConfig c = simple_config({"A"});
  EXPECT_THROW(dataset_from_csv("A,GID\ns1,L1\ns2,L4\n", "GID,X\nL1,x\nL1,y\n", c),
               GroupMismatchError);
  EXPECT_THROW(dataset_from_csv("A,GID\ns1,L1\ns2,L1\n", "GID,X\nL1,x\nL2,y\n", c),
               GroupMismatchError);
}

TEST(AnonymizedTest, CardinalityMismatch) {
  try {
    dataset_from_csv("A,GID\ns1,L1\ns2,L1\ns3,L1\n", "GID,X\nL1,x\nL1,y\n",
                     simple_config({"A"}));
    FAIL() << "expected GroupMismatchError";
  } catch (const GroupMismatchError& e) {
    EXPECT_NE(std::string(e.what()).find("3"), std::string::npos);
  }
}

TEST(AnonymizedTest, MissingColumns) {
  const SchemaConfig c = simple_config({"A"});
  EXPECT_THROW(dataset_from_csv("A\ns1\n", "GID,X\nL1,x\n", c), ParseError);
  EXPECT_THROW(dataset_from_csv("A,GID\ns1,L1\n", "GID,Y\nL1,x\n", c), ParseError);
  EXPECT_THROW(dataset_from_csv("B,GID\ns1,L1\n", "GID,X\nL1,x\n", c), SchemaError);
}

TEST(AnonymizedTest, RoundTripIsIdentical) {
  AnonymizedDataset ds = testing::newton_example();
  std::ostringstream qi, sens;
  write_anonymized(ds, qi, sens);
  AnonymizedDataset back = dataset_from_csv(qi.str(), sens.str(), simple_config({"A"}));
  ASSERT_EQ(back.groups().size(), ds.groups().size());
  EXPECT_EQ(back.qi_rows(), ds.qi_rows());
  for (std::size_t g = 0; g < ds.groups().size(); ++g) {
    EXPECT_EQ(back.groups()[g].label, ds.groups()[g].label);
    EXPECT_EQ(back.groups()[g].members, ds.groups()[g].members);
    auto a = back.groups()[g].sensitive_values;
    auto b = ds.groups()[g].sensitive_values;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
  }
  std::ostringstream qi2, sens2;
  write_anonymized(back, qi2, sens2);
  EXPECT_EQ(qi.str(), qi2.str());
  EXPECT_EQ(sens.str(), sens2.str());
}

TEST(AnonymizedTest, WriterSortsValuesWithinGroups) {
  AnonymizedDataset ds = dataset_from_csv("A,GID\ns1,L1\ns2,L1\n", "GID,X\nL1,z\nL1,x\n",
                                          simple_config({"A"}));
  std::ostringstream qi, sens;
  write_anonymized(ds, qi, sens);
  EXPECT_EQ(sens.str(), "GID,X\nL1,x\nL1,z\n");
  EXPECT_EQ(qi.str(), "A,GID\ns1,L1\ns2,L1\n");
}

TEST(AnonymizedTest, SaveAndLoadFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "fgaudit_io_test";
  std::filesystem::create_directories(dir);
  AnonymizedDataset ds = testing::newton_example();
  save_anonymized(ds, dir / "qi.csv", dir / "s.csv");
  AnonymizedDataset back =
      load_anonymized(dir / "qi.csv", dir / "s.csv", simple_config({"A"}));
  EXPECT_EQ(back.qi_rows(), ds.qi_rows());
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace fgaudit
