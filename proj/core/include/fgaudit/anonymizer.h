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

#ifndef FGAUDIT_ANONYMIZER_H_
#define FGAUDIT_ANONYMIZER_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include "fgaudit/dataset.h"

namespace fgaudit {

enum class Strategy {
  // Groups of size l or l+1 holding each distinct sensitive value at most once.
  kAnatomy,
  // Shuffled greedy packing into groups of size l; a grouping-insensitive
  // baseline.
  kRandomPartition,
};

Strategy parse_strategy(std::string_view name);
std::string_view strategy_name(Strategy s);

struct AnonymizerConfig {
  int l = 2;
  Strategy strategy = Strategy::kAnatomy;
  std::uint64_t seed = 0;
  // Reshuffles allowed before kRandomPartition gives up.
  int max_retries = 200;
};

// Bucketizes `table` into an l-diverse anonymized dataset whose row ids equal
// the table's. Deterministic in (table, config). Throws EligibilityError when
// no l-diverse partition of the required shape exists (or, for
// kRandomPartition, none was found within max_retries), and
// std::invalid_argument for l < 2.
AnonymizedDataset anonymize(const Table& table, const AnonymizerConfig& config);

// Publishes an explicit partition of `table` (labels L1, L2, ...). Groups must
// be non-empty and cover every row exactly once.
AnonymizedDataset bucketize(const Table& table,
                            const std::vector<std::vector<RowId>>& groups);

// One group per row; publishing this discloses every linkage.
AnonymizedDataset singleton_partition(const Table& table);

// True iff in every group each sensitive value occurs at most |group|/l times.
bool check_l_diversity(const AnonymizedDataset& dataset, int l);

}  // namespace fgaudit

#endif  // FGAUDIT_ANONYMIZER_H_
