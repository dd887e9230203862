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

#include "fgaudit/anonymizer.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "fgaudit/errors.h"
#include "rng.h"

namespace fgaudit {
namespace {

bool group_has_value(const Table& table, const std::vector<RowId>& group,
                     const std::string& value) {
  return std::any_of(group.begin(), group.end(), [&](RowId r) {
    return table.sensitive_value(r) == value;
  });
}

// Places each leftover row into a size-`l` group lacking its value.
bool place_residue(const Table& table, std::size_t l,
                   const std::vector<RowId>& residue,
                   std::vector<std::vector<RowId>>& groups) {
  for (RowId r : residue) {
    const std::string& v = table.sensitive_value(r);
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) {
      return g.size() == l && !group_has_value(table, g, v);
    });
    if (it == groups.end()) return false;
    it->push_back(r);
  }
  return true;
}

void check_eligible(const Table& table, std::size_t l) {
  std::unordered_map<std::string, std::size_t> counts;
  for (RowId r = 0; r < table.size(); ++r) ++counts[table.sensitive_value(r)];
  if (counts.size() < l) {
    throw EligibilityError("not l-eligible: " + std::to_string(counts.size()) +
                           " distinct sensitive values but l = " +
                           std::to_string(l));
  }
  for (const auto& [value, c] : counts) {
    if (c * l > table.size()) {
      throw EligibilityError("not l-eligible: value '" + value + "' occurs " +
                             std::to_string(c) + " times in " +
                             std::to_string(table.size()) + " rows (l = " +
                             std::to_string(l) + ")");
    }
  }
}

std::vector<std::vector<RowId>> anatomy_groups(const Table& table,
                                               std::size_t l,
                                               rng::Engine& eng) {
  // Buckets in first-seen value order; ties on size break toward earlier ones.
  std::vector<std::vector<RowId>> buckets;
  std::unordered_map<std::string, std::size_t> bucket_of;
  for (RowId r = 0; r < table.size(); ++r) {
    auto [it, inserted] =
        bucket_of.try_emplace(table.sensitive_value(r), buckets.size());
    if (inserted) buckets.emplace_back();
    buckets[it->second].push_back(r);
  }
  for (auto& b : buckets) rng::shuffle(b, eng);

  std::vector<std::vector<RowId>> groups;
  std::vector<std::size_t> order(buckets.size());
  for (;;) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return buckets[a].size() > buckets[b].size();
    });
    if (buckets[order[l - 1]].empty()) break;
    std::vector<RowId> group;
    for (std::size_t i = 0; i < l; ++i) {
      group.push_back(buckets[order[i]].back());
      buckets[order[i]].pop_back();
    }
    groups.push_back(std::move(group));
  }

  std::vector<RowId> residue;
  for (const auto& b : buckets) residue.insert(residue.end(), b.begin(), b.end());
  if (!place_residue(table, l, residue, groups)) {
    throw EligibilityError("not l-eligible: residue rows cannot be placed");
  }
  return groups;
}

std::vector<std::vector<RowId>> random_groups(const Table& table, std::size_t l,
                                              int max_retries,
                                              rng::Engine& eng) {
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    std::vector<RowId> pool(table.size());
    std::iota(pool.begin(), pool.end(), 0);
    rng::shuffle(pool, eng);

    std::vector<std::vector<RowId>> groups;
    bool failed = false;
    while (pool.size() >= l) {
      std::vector<RowId> group;
      std::vector<RowId> rest;
      rest.reserve(pool.size());
      for (RowId r : pool) {
        if (group.size() < l &&
            !group_has_value(table, group, table.sensitive_value(r))) {
          group.push_back(r);
        } else {
          rest.push_back(r);
        }
      }
      if (group.size() < l) {
        failed = true;
        break;
      }
      groups.push_back(std::move(group));
      pool = std::move(rest);
    }
    if (failed || groups.empty()) continue;
    if (place_residue(table, l, pool, groups)) return groups;
  }
  throw EligibilityError("random partition found no l-diverse grouping after " +
                         std::to_string(max_retries + 1) + " attempts");
}

}  // namespace

Strategy parse_strategy(std::string_view name) {
  if (name == "anatomy") return Strategy::kAnatomy;
  if (name == "random_partition" || name == "random") {
    return Strategy::kRandomPartition;
  }
  throw std::invalid_argument("unknown strategy '" + std::string(name) + "'");
}

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kAnatomy:
      return "anatomy";
    case Strategy::kRandomPartition:
      return "random_partition";
  }
  return "unknown";
}

AnonymizedDataset anonymize(const Table& table, const AnonymizerConfig& config) {
  if (config.l < 2) throw std::invalid_argument("l must be at least 2");
  const auto l = static_cast<std::size_t>(config.l);
  check_eligible(table, l);

  rng::Engine eng(config.seed);
  std::vector<std::vector<RowId>> groups =
      config.strategy == Strategy::kAnatomy
          ? anatomy_groups(table, l, eng)
          : random_groups(table, l, config.max_retries, eng);
  for (auto& g : groups) std::sort(g.begin(), g.end());
  return bucketize(table, groups);
}

AnonymizedDataset bucketize(const Table& table,
                            const std::vector<std::vector<RowId>>& groups) {
  const Schema& src = table.schema();
  std::vector<std::string> attributes = src.qi_attributes();
  attributes.push_back(src.sensitive_attribute());
  Schema schema = Schema::create(attributes, src.qi_attributes(),
                                 src.sensitive_attribute(), src.target());

  std::vector<Row> qi_rows;
  qi_rows.reserve(table.size());
  for (RowId r = 0; r < table.size(); ++r) qi_rows.push_back(table.qi_values(r));

  std::vector<AGroup> out;
  out.reserve(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    AGroup g;
    g.label = "L" + std::to_string(i + 1);
    g.members = groups[i];
    for (RowId r : g.members) {
      if (r >= table.size()) {
        throw std::invalid_argument("partition references unknown row " +
                                    std::to_string(r));
      }
      g.sensitive_values.push_back(table.sensitive_value(r));
    }
    out.push_back(std::move(g));
  }
  return AnonymizedDataset(std::move(schema), std::move(qi_rows), std::move(out));
}

AnonymizedDataset singleton_partition(const Table& table) {
  std::vector<std::vector<RowId>> groups;
  groups.reserve(table.size());
  for (RowId r = 0; r < table.size(); ++r) groups.push_back({r});
  return bucketize(table, groups);
}

bool check_l_diversity(const AnonymizedDataset& dataset, int l) {
  if (l < 1) throw std::invalid_argument("l must be positive");
  for (const auto& g : dataset.groups()) {
    std::map<std::string_view, std::size_t> counts;
    std::size_t worst = 0;
    for (const auto& v : g.sensitive_values) worst = std::max(worst, ++counts[v]);
    if (worst * static_cast<std::size_t>(l) > g.size()) return false;
  }
  return true;
}

}  // namespace fgaudit
