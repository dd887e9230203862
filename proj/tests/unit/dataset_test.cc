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

#include "fgaudit/dataset.h"

#include <gtest/gtest.h>

#include <random>

#include "fgaudit/errors.h"
#include "test_support.h"

namespace fgaudit {
namespace {

using testing::newton_example;

Schema nationality_schema() {
  return Schema::create({"Age", "Nationality", "Sex", "Disease"},
                        {"Sex", "Nationality"}, "Disease", Target({"HIV"}));
}

TEST(SchemaTest, OrdersQiAttributesCanonically) {
  Schema s = nationality_schema();
  EXPECT_EQ(s.qi_attributes(), (std::vector<std::string>{"Nationality", "Sex"}));
  EXPECT_EQ(s.qi_columns(), (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(s.sensitive_column(), 3u);
  EXPECT_EQ(s.qi_index("Sex"), 1u);
  EXPECT_FALSE(s.qi_index("Age").has_value());
}

TEST(SchemaTest, RejectsInvalidDesignations) {
  EXPECT_THROW(Schema::create({"A", "X"}, {"X"}, "X", Target({"x"})), SchemaError);
  EXPECT_THROW(Schema::create({"A", "X"}, {"B"}, "X", Target({"x"})), SchemaError);
  EXPECT_THROW(Schema::create({"A", "X"}, {"A"}, "Y", Target({"x"})), SchemaError);
  EXPECT_THROW(Schema::create({"A", "X"}, {}, "X", Target({"x"})), SchemaError);
  EXPECT_THROW(Schema::create({"A", "A", "X"}, {"A"}, "X", Target({"x"})),
               SchemaError);
  EXPECT_THROW(Target(std::set<std::string>{}), std::invalid_argument);
}

TEST(TargetTest, ContainsAndLabel) {
  Target t({"5th-6th", "1st-4th"});
  EXPECT_TRUE(t.contains("1st-4th"));
  EXPECT_FALSE(t.contains("HS-grad"));
  EXPECT_EQ(t.label(), "1st-4th|5th-6th");
}

TEST(TableTest, RejectsWrongArity) {
  EXPECT_THROW(Table(nationality_schema(), {{"30", "US", "M"}}), ParseError);
}

TEST(TableTest, ExposesQiAndSensitiveValues) {
  Table t(nationality_schema(), {{"30", "American", "M", "HIV"}});
  EXPECT_EQ(t.qi_values(0), (Row{"American", "M"}));
  EXPECT_EQ(t.sensitive_value(0), "HIV");
}

TEST(AnonymizedDatasetTest, NewtonExampleShape) {
  AnonymizedDataset ds = newton_example();
  ASSERT_EQ(ds.groups().size(), 3u);
  for (const AGroup& g : ds.groups()) EXPECT_EQ(g.size(), 2u);
  EXPECT_EQ(ds.groups()[0].label, "L1");
  EXPECT_EQ(ds.groups()[2].count_in(Target({"x"})), 0u);
  EXPECT_DOUBLE_EQ(ds.base_rate(Target({"x"})), 2.0 / 6.0);
  EXPECT_EQ(ds.group_of(3).label, "L2");
}

TEST(AnonymizedDatasetTest, RejectsBrokenPartitions) {
  Schema s = Schema::create({"A", "X"}, {"A"}, "X", Target({"x"}));
  std::vector<Row> qi = {{"a"}, {"b"}};
  auto group = [](std::vector<RowId> m, std::vector<std::string> v) {
    AGroup g;
    g.label = "G";
    g.members = std::move(m);
    g.sensitive_values = std::move(v);
    return g;
  };
  EXPECT_THROW(AnonymizedDataset(s, qi, {group({0}, {"x"})}), GroupMismatchError);
  EXPECT_THROW(AnonymizedDataset(s, qi, {group({0, 1}, {"x"})}), GroupMismatchError);
  EXPECT_THROW(AnonymizedDataset(s, qi, {group({0, 0}, {"x", "y"}),
                                         group({1}, {"y"})}),
               GroupMismatchError);
  EXPECT_THROW(AnonymizedDataset(s, qi, {group({0, 5}, {"x", "y"})}),
               GroupMismatchError);
  EXPECT_NO_THROW(AnonymizedDataset(s, qi, {group({0, 1}, {"x", "y"})}));
}

TEST(SignatureTest, CanonicalFromPairs) {
  Schema s = nationality_schema();
  Signature a = Signature::from_pairs(s, {{"Sex", "M"}, {"Nationality", "American"}});
  Signature b = Signature::from_pairs(s, {{"Nationality", "American"}, {"Sex", "M"}});
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.key(), b.key());
  EXPECT_EQ(a.to_string(s), "{Nationality=American, Sex=M}");
  EXPECT_THROW(Signature::from_pairs(s, {{"Age", "30"}}), std::invalid_argument);
  EXPECT_THROW(Signature::from_pairs(s, {}), std::invalid_argument);
  EXPECT_THROW(Signature({1, 0}, {"a", "b"}), std::invalid_argument);
  EXPECT_THROW(Signature({0, 0}, {"a", "b"}), std::invalid_argument);
  EXPECT_THROW(Signature({0}, {"a", "b"}), std::invalid_argument);
}

TEST(MatchTest, AmericanAndJapanese) {
  Schema s = nationality_schema();
  Signature american = Signature::from_pairs(s, {{"Nationality", "American"}});
  const Row first = {"American", "M"};
  const Row second = {"Japanese", "F"};
  EXPECT_TRUE(match(first, american));
  EXPECT_FALSE(match(second, american));
}

TEST(MatchTest, EmptySignatureIsRejected) {
  EXPECT_THROW(Signature({}, {}), std::invalid_argument);
}

TEST(GroupSignatureMembersTest, NewtonExampleCounts) {
  AnonymizedDataset ds = newton_example();
  Signature s1({0}, {"s1"});
  EXPECT_EQ(group_signature_members(ds, ds.groups()[0], s1), (std::vector<RowId>{0}));
  EXPECT_EQ(group_signature_members(ds, ds.groups()[1], s1),
            (std::vector<RowId>{2, 3}));
  EXPECT_TRUE(group_signature_members(ds, ds.groups()[2], s1).empty());
}

// A tuple matching a signature matches every non-empty sub-signature of it.
TEST(MatchTest, MonotoneInSpecificity) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> value(0, 2);
  for (int trial = 0; trial < 500; ++trial) {
    Row tuple(4);
    for (auto& v : tuple) v = std::to_string(value(rng));
    const unsigned mask = 1 + rng() % 15;
    std::vector<std::size_t> attrs;
    for (std::size_t a = 0; a < 4; ++a) {
      if (mask >> a & 1u) attrs.push_back(a);
    }
    Signature full = Signature::project(tuple, attrs);
    ASSERT_TRUE(match(tuple, full));
    for (unsigned sub = 1; sub < (1u << attrs.size()); ++sub) {
      std::vector<std::size_t> sa;
      std::vector<std::string> sv;
      for (std::size_t i = 0; i < attrs.size(); ++i) {
        if (sub >> i & 1u) {
          sa.push_back(attrs[i]);
          sv.push_back(full.values()[i]);
        }
      }
      EXPECT_TRUE(match(tuple, Signature(sa, sv)));
    }
  }
}

TEST(ProjectionKeyTest, AgreesWithSignatureKey) {
  const Row tuple = {"a", "b", "c"};
  const std::vector<std::size_t> attrs = {0, 2};
  EXPECT_EQ(projection_key(tuple, attrs), Signature::project(tuple, attrs).key());
}

}  // namespace
}  // namespace fgaudit
