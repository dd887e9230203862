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

#include "fgaudit/signature_lattice.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <random>
#include <tuple>

#include "test_support.h"

namespace fgaudit {
namespace {

using testing::build_dataset;
using testing::exhaustive_support;
using testing::GroupSpec;

// Each row in its own group; the grouping is irrelevant to support counts.
AnonymizedDataset rows_dataset(const std::vector<std::string>& names,
                               const std::vector<Row>& rows) {
  std::vector<GroupSpec> groups;
  for (const Row& r : rows) groups.push_back({{{r, "x"}}});
  return build_dataset(names, groups);
}

TEST(RequiredSampleSizeTest, ReferenceValues) {
  EXPECT_EQ(required_sample_size(0.01, 0.9), 3993u);
  EXPECT_EQ(required_sample_size(0.02, 1.0), 867u);
  for (double eps : {0.005, 0.01, 0.03, 0.1, 0.25}) {
    for (double sigma : {0.01, 0.1, 0.5, 0.9, 1.0}) {
      EXPECT_EQ(required_sample_size(eps, sigma),
                static_cast<std::size_t>(std::ceil(std::log(2.0 / sigma) / (2 * eps * eps))));
    }
  }
}

TEST(RequiredSampleSizeTest, DomainErrors) {
  EXPECT_THROW(required_sample_size(0.01, 2.0), std::invalid_argument);
  EXPECT_THROW(required_sample_size(0.01, 0.0), std::invalid_argument);
  EXPECT_THROW(required_sample_size(0.0, 0.5), std::invalid_argument);
  EXPECT_THROW(required_sample_size(-1.0, 0.5), std::invalid_argument);
  EXPECT_THROW(SampleGate::with_min_support(0), std::invalid_argument);
}

TEST(SampleGateTest, Accessors) {
  SampleGate g = SampleGate::from_error_bounds(0.01, 0.9);
  EXPECT_EQ(g.min_support(), 3993u);
  EXPECT_EQ(g.epsilon(), 0.01);
  SampleGate h = SampleGate::with_min_support(7);
  EXPECT_EQ(h.min_support(), 7u);
  EXPECT_FALSE(h.epsilon().has_value());
}

TEST(EnumerateAdmittedTest, TenAmericansArePruned) {
  std::vector<Row> rows;
  for (int i = 0; i < 10; ++i) rows.push_back({"American", "M"});
  for (int i = 0; i < 4000; ++i) rows.push_back({"Japanese", "M"});
  AnonymizedDataset ds = rows_dataset({"Nationality", "Sex"}, rows);
  AdmittedSignatures a =
      enumerate_admitted(ds, SampleGate::from_error_bounds(0.01, 0.9), 2);
  ASSERT_EQ(a.sets.size(), 3u);
  const std::vector<std::size_t> nat = {0};
  const AdmittedAttributeSet* n = a.find(nat);
  ASSERT_NE(n, nullptr);
  ASSERT_EQ(n->signatures.size(), 1u);
  EXPECT_EQ(n->signatures[0].signature.values()[0], "Japanese");
  const std::vector<std::size_t> both = {0, 1};
  const AdmittedAttributeSet* ns = a.find(both);
  ASSERT_NE(ns, nullptr);
  // Only the Japanese extension was ever counted.
  EXPECT_EQ(ns->candidates_counted, 1u);
  ASSERT_EQ(ns->signatures.size(), 1u);
  EXPECT_EQ(ns->signatures[0].support, 4000u);
}

TEST(EnumerateAdmittedTest, MinSupportOneAdmitsEverything) {
  AnonymizedDataset ds = testing::newton_example();
  AdmittedSignatures a = enumerate_admitted(ds, SampleGate::with_min_support(1), 3);
  ASSERT_EQ(a.sets.size(), 1u);
  std::size_t total = 0;
  for (const auto& s : a.sets[0].signatures) total += s.support;
  EXPECT_EQ(total, ds.row_count());
  EXPECT_EQ(a.sets[0].signatures[0].signature.values()[0], "s1");
  EXPECT_EQ(a.admitted_set_count(), 1u);
  EXPECT_THROW(enumerate_admitted(ds, SampleGate::with_min_support(1), 0),
               std::invalid_argument);
}

TEST(EnumerateAdmittedTest, OnlyTheLargeSignatureSurvives) {
  std::vector<Row> rows;
  for (int i = 0; i < 100; ++i) rows.push_back({"b"});
  for (int i = 0; i < 5000; ++i) rows.push_back({"a"});
  AnonymizedDataset ds = rows_dataset({"A"}, rows);
  AdmittedSignatures a =
      enumerate_admitted(ds, SampleGate::from_error_bounds(0.01, 0.9), 1);
  ASSERT_EQ(a.sets[0].signatures.size(), 1u);
  EXPECT_EQ(a.sets[0].signatures[0].signature.values()[0], "a");
  EXPECT_EQ(a.sets[0].signatures[0].support,
            exhaustive_support(ds, {0}).at({"a"}));
}

TEST(EnumerateAdmittedTest, PrunedSetsAreRecorded) {
  AnonymizedDataset ds = rows_dataset({"A", "B"}, {{"a", "b"}, {"a", "c"}});
  AdmittedSignatures a = enumerate_admitted(ds, SampleGate::with_min_support(2), 2);
  ASSERT_EQ(a.sets.size(), 3u);
  EXPECT_FALSE(a.sets[0].pruned());
  EXPECT_TRUE(a.sets[1].pruned());
  EXPECT_TRUE(a.sets[2].pruned());
  EXPECT_EQ(a.admitted_set_count(), 1u);
}

std::vector<std::vector<std::size_t>> subsets_by_size(std::size_t q, std::size_t max) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t k = 1; k <= std::min(q, max); ++k) {
    std::vector<std::vector<std::size_t>> level;
    for (unsigned mask = 1; mask < (1u << q); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != k) continue;
      std::vector<std::size_t> s;
      for (std::size_t a = 0; a < q; ++a) {
        if (mask >> a & 1u) s.push_back(a);
      }
      level.push_back(s);
    }
    std::sort(level.begin(), level.end());
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

// The pruned walk admits exactly what exhaustive counting admits, in
// lexicographic set order and first-seen signature order; supports are
// anti-monotone and cover every row.
TEST(EnumerateAdmittedProperty, PruningIsSound) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t q = 1 + rng() % 4;
    const std::size_t n = 1 + rng() % 60;
    std::vector<std::string> names;
    for (std::size_t a = 0; a < q; ++a) names.push_back("Q" + std::to_string(a));
    std::vector<Row> rows;
    for (std::size_t i = 0; i < n; ++i) {
      Row r;
      for (std::size_t a = 0; a < q; ++a) r.push_back("v" + std::to_string(rng() % (2 + a)));
      rows.push_back(r);
    }
    AnonymizedDataset ds = rows_dataset(names, rows);
    const std::size_t j = 1 + rng() % 8;
    const std::size_t max_size = 1 + rng() % 4;
    AdmittedSignatures a = enumerate_admitted(ds, SampleGate::with_min_support(j), max_size);

    const auto expected_sets = subsets_by_size(q, max_size);
    ASSERT_EQ(a.sets.size(), expected_sets.size());
    for (std::size_t s = 0; s < expected_sets.size(); ++s) {
      const auto& attrs = expected_sets[s];
      EXPECT_EQ(a.sets[s].attributes, attrs);
      auto support = exhaustive_support(ds, attrs);
      std::size_t covered = 0;
      for (const auto& [k, c] : support) covered += c;
      EXPECT_EQ(covered, n);

      std::vector<std::pair<std::vector<std::string>, std::size_t>> expected;
      for (RowId r = 0; r < n; ++r) {
        std::vector<std::string> key;
        for (std::size_t at : attrs) key.push_back(rows[r][at]);
        const std::size_t c = support.at(key);
        if (c < j) continue;
        bool seen = false;
        for (const auto& e : expected) seen = seen || e.first == key;
        if (!seen) expected.emplace_back(key, c);
      }
      ASSERT_EQ(a.sets[s].signatures.size(), expected.size());
      for (std::size_t i = 0; i < expected.size(); ++i) {
        EXPECT_EQ(a.sets[s].signatures[i].signature.values(), expected[i].first);
        EXPECT_EQ(a.sets[s].signatures[i].support, expected[i].second);
      }

      // Anti-monotone support against every one-smaller subset.
      if (attrs.size() > 1) {
        for (std::size_t drop = 0; drop < attrs.size(); ++drop) {
          std::vector<std::size_t> sub = attrs;
          sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
          auto sub_support = exhaustive_support(ds, sub);
          for (const auto& [key, c] : support) {
            auto sk = key;
            sk.erase(sk.begin() + static_cast<std::ptrdiff_t>(drop));
            EXPECT_LE(c, sub_support.at(sk));
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace fgaudit
