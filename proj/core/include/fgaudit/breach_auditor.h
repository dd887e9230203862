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

#ifndef FGAUDIT_BREACH_AUDITOR_H_
#define FGAUDIT_BREACH_AUDITOR_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fgaudit/dataset.h"
#include "fgaudit/foreground_miner.h"
#include "fgaudit/possible_worlds.h"

namespace fgaudit {

struct AuditConfig {
  // A tuple is breached when its linkage exceeds 1 / r strictly.
  double r = 2.0;
  // Targets to audit; empty means every target present in the knowledge.
  std::vector<Target> targets;
  // Permit auditing with no mined distribution, using each target's base rate
  // for every tuple (linkage n_x / N).
  bool allow_base_rate_only = false;
  std::uint64_t world_cap = kDefaultWorldCap;
  int workers = 1;
};

struct TupleVerdict {
  RowId row = 0;
  std::size_t group = 0;
  // Greatest p(t:x) over every distribution and target; empty when the
  // group could not be evaluated.
  std::optional<double> max_linkage;
  // Attribute set and target achieving it (empty attribute set = base rate).
  std::vector<std::size_t> attribute_set;
  Target target;
  bool flagged = false;
};

struct BreachMetrics {
  // Present only when the original table was supplied.
  std::optional<double> recall;
  std::optional<double> false_flag_rate;
  std::optional<double> avg_breach_prob;
  std::size_t sensitive_tuples = 0;
  std::size_t flagged_tuples = 0;
  double avg_delta = 0.0;
};

struct GroupFailure {
  std::string group_label;
  std::string message;
};

struct BreachReport {
  double r = 2.0;
  double threshold = 0.5;
  std::vector<TupleVerdict> tuples;  // one per row, by row id
  BreachMetrics metrics;
  std::vector<GroupFailure> failures;
  std::vector<std::string> warnings;
};

// Per-tuple worst-case linkage under every mined distribution. World
// explosions are reported per group; the remaining groups are still audited.
// Throws std::invalid_argument if there is no distribution to apply and
// base-rate-only auditing was not allowed, or if r < 1.
BreachReport audit(const AnonymizedDataset& dataset,
                   const MinedKnowledge& knowledge, const AuditConfig& config);
// Also computes recall, false-flag rate and average breach probability
// against the true sensitive values of `original` (same rows, same order).
BreachReport audit(const AnonymizedDataset& dataset,
                   const MinedKnowledge& knowledge, const AuditConfig& config,
                   const Table& original);

// Mean over distributions of the per-group spread max f - min f among the
// signatures matched by the group's members; groups matching no retained
// signature are skipped.
double delta_metric(const AnonymizedDataset& dataset,
                    const MinedKnowledge& knowledge);

struct QuerySpec {
  std::size_t qd = 1;          // QI attributes constrained per query
  double selectivity = 0.05;   // expected fraction of rows matched
  std::size_t count = 10000;   // queries to average over
  std::uint64_t seed = 0;
};

// Mean relative error |estimate - actual| / max(actual, 1) of random COUNT
// queries "QI predicates AND sensitive value in target", answered exactly on
// `original` and estimated from `dataset` by spreading each group's target
// fraction uniformly over its members. Throws std::invalid_argument on an
// out-of-range spec or when the two inputs do not describe the same rows.
double query_error(const Table& original, const AnonymizedDataset& dataset,
                   const QuerySpec& spec);

}  // namespace fgaudit

#endif  // FGAUDIT_BREACH_AUDITOR_H_
