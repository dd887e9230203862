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

// JSON report documents. A report has the sections
//
//   config         the run's parsed options
//   distributions  one entry per attempted (attribute set, target) system
//   base_rates     dataset-wide rate of each target
//   tuples         per-row audit verdicts (audit only)
//   metrics        dataset-level audit metrics (audit and query-error)
//   diagnostics    counts, warnings and per-group failures
//
// Attribute sets and signatures are written by attribute name, so a mining
// report can be read back against any dataset with the same QI attributes.

#ifndef FGAUDIT_TOOLS_REPORT_H_
#define FGAUDIT_TOOLS_REPORT_H_

#include "json.hpp"

#include "fgaudit/breach_auditor.h"
#include "fgaudit/dataset.h"
#include "fgaudit/foreground_miner.h"

namespace fgaudit::cli {

using Json = nlohmann::ordered_json;

Json target_to_json(const Target& target);
Target target_from_json(const Json& j);

Json distributions_to_json(const MinedKnowledge& knowledge, const Schema& schema);
Json base_rates_to_json(const MinedKnowledge& knowledge);

// Rebuilds knowledge from the distributions and base_rates sections of a
// report. Only converged systems regain a distribution. Throws ParseError
// on malformed input or attributes absent from `schema`.
MinedKnowledge knowledge_from_json(const Json& report, const Schema& schema);

Json tuples_to_json(const BreachReport& report, const AnonymizedDataset& dataset);
Json metrics_to_json(const BreachMetrics& metrics);

}  // namespace fgaudit::cli

#endif  // FGAUDIT_TOOLS_REPORT_H_
