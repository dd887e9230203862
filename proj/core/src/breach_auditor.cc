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

#include "fgaudit/breach_auditor.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "fgaudit/errors.h"
#include "parallel.h"
#include "rng.h"

namespace fgaudit {
namespace {

std::vector<Target> audited_targets(const MinedKnowledge& knowledge,
                                    const AuditConfig& config) {
  if (!config.targets.empty()) return config.targets;
  std::vector<Target> out;
  auto add = [&](const Target& t) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  };
  for (const auto& [t, rate] : knowledge.base_rates) add(t);
  for (const auto& s : knowledge.systems) add(s.target);
  return out;
}

double fallback_for(const MinedKnowledge& knowledge,
                    const AnonymizedDataset& dataset, const Target& target) {
  for (const auto& [t, rate] : knowledge.base_rates) {
    if (t == target) return rate;
  }
  return dataset.base_rate(target);
}

double mean_delta(const AnonymizedDataset& dataset,
                  const std::vector<const GlobalDistribution*>& dists) {
  double sum = 0.0;
  std::size_t used = 0;
  for (const GlobalDistribution* g : dists) {
    double group_sum = 0.0;
    std::size_t groups = 0;
    for (const AGroup& group : dataset.groups()) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (RowId r : group.members) {
        if (auto f = g->lookup(dataset.qi_row(r))) {
          lo = std::min(lo, *f);
          hi = std::max(hi, *f);
        }
      }
      if (hi < lo) continue;
      group_sum += hi - lo;
      ++groups;
    }
    if (groups == 0) continue;
    sum += group_sum / static_cast<double>(groups);
    ++used;
  }
  return used == 0 ? 0.0 : sum / static_cast<double>(used);
}

struct GroupOutcome {
  std::vector<double> best;  // per member; NaN until evaluated
  std::vector<const GlobalDistribution*> best_dist;
  std::vector<const Target*> best_target;
  std::optional<GroupFailure> failure;
  std::vector<std::string> warnings;
};

BreachReport audit_impl(const AnonymizedDataset& dataset,
                        const MinedKnowledge& knowledge,
                        const AuditConfig& config) {
  if (!(config.r >= 1.0)) throw std::invalid_argument("r must be at least 1");
  const std::vector<Target> targets = audited_targets(knowledge, config);
  if (targets.empty()) throw std::invalid_argument("no sensitive target to audit");

  std::vector<const GlobalDistribution*> dists;
  for (const GlobalDistribution* g : knowledge.distributions()) {
    if (std::find(targets.begin(), targets.end(), g->target()) != targets.end()) {
      dists.push_back(g);
    }
  }
  const bool base_rate_only = dists.empty();
  if (base_rate_only && !config.allow_base_rate_only) {
    throw std::invalid_argument(
        "no mined distribution applies and base-rate-only auditing is off");
  }

  BreachReport report;
  report.r = config.r;
  report.threshold = 1.0 / config.r;
  if (base_rate_only) {
    report.warnings.push_back(
        "no mined distribution; linkages use dataset base rates only");
  }

  const auto& groups = dataset.groups();
  std::vector<GroupOutcome> outcomes(groups.size());
  internal::parallel_for(groups.size(), config.workers, [&](std::size_t gi) {
    const AGroup& group = groups[gi];
    GroupOutcome& out = outcomes[gi];
    const std::size_t n = group.size();
    out.best.assign(n, std::numeric_limits<double>::quiet_NaN());
    out.best_dist.assign(n, nullptr);
    out.best_target.assign(n, nullptr);
    try {
      for (const Target& target : targets) {
        WorldSet ws = enumerate_worlds(group, target, config.world_cap);
        auto consider = [&](const std::vector<double>& link,
                            const GlobalDistribution* g) {
          for (std::size_t j = 0; j < n; ++j) {
            if (std::isnan(out.best[j]) || link[j] > out.best[j]) {
              out.best[j] = link[j];
              out.best_dist[j] = g;
              out.best_target[j] = &target;
            }
          }
        };
        if (base_rate_only) {
          std::vector<double> p(n, fallback_for(knowledge, dataset, target));
          consider(member_linkages(ws, p), nullptr);
          continue;
        }
        for (const GlobalDistribution* g : dists) {
          if (!(g->target() == target)) continue;
          auto p = member_probabilities(dataset, group, *g,
                                        fallback_for(knowledge, dataset, target));
          bool degenerate = false;
          auto link = member_linkages(ws, p, &degenerate);
          if (degenerate) {
            out.warnings.push_back("group " + group.label +
                                   ": every world has zero weight under a "
                                   "distribution for target " +
                                   target.label() + "; used uniform worlds");
          }
          consider(link, g);
        }
      }
    } catch (const WorldExplosionError& e) {
      out.failure = GroupFailure{group.label, e.what()};
      std::fill(out.best.begin(), out.best.end(),
                std::numeric_limits<double>::quiet_NaN());
    }
  });

  report.tuples.resize(dataset.row_count());
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    GroupOutcome& out = outcomes[gi];
    if (out.failure) report.failures.push_back(*out.failure);
    for (auto& w : out.warnings) report.warnings.push_back(std::move(w));
    for (std::size_t j = 0; j < groups[gi].size(); ++j) {
      TupleVerdict& v = report.tuples[groups[gi].members[j]];
      v.row = groups[gi].members[j];
      v.group = gi;
      if (std::isnan(out.best[j])) continue;
      v.max_linkage = out.best[j];
      if (out.best_dist[j]) v.attribute_set = out.best_dist[j]->attribute_set();
      if (out.best_target[j]) v.target = *out.best_target[j];
      v.flagged = out.best[j] > report.threshold;
      if (v.flagged) ++report.metrics.flagged_tuples;
    }
  }
  report.metrics.avg_delta = mean_delta(dataset, dists);
  return report;
}

}  // namespace

BreachReport audit(const AnonymizedDataset& dataset,
                   const MinedKnowledge& knowledge, const AuditConfig& config) {
  return audit_impl(dataset, knowledge, config);
}

BreachReport audit(const AnonymizedDataset& dataset,
                   const MinedKnowledge& knowledge, const AuditConfig& config,
                   const Table& original) {
  if (original.size() != dataset.row_count()) {
    throw std::invalid_argument("original table and dataset differ in rows");
  }
  BreachReport report = audit_impl(dataset, knowledge, config);
  const std::vector<Target> targets = audited_targets(knowledge, config);

  std::size_t sensitive = 0, caught = 0, other = 0, wrongly = 0;
  double prob_sum = 0.0;
  for (const TupleVerdict& v : report.tuples) {
    const std::string& truth = original.sensitive_value(v.row);
    const bool is_sensitive =
        std::any_of(targets.begin(), targets.end(),
                    [&](const Target& t) { return t.contains(truth); });
    if (is_sensitive) {
      ++sensitive;
      if (v.flagged) ++caught;
      prob_sum += v.max_linkage.value_or(0.0);
    } else {
      ++other;
      if (v.flagged) ++wrongly;
    }
  }
  auto ratio = [](double num, std::size_t den) {
    return den == 0 ? 0.0 : num / static_cast<double>(den);
  };
  report.metrics.sensitive_tuples = sensitive;
  report.metrics.recall = ratio(static_cast<double>(caught), sensitive);
  report.metrics.false_flag_rate = ratio(static_cast<double>(wrongly), other);
  report.metrics.avg_breach_prob = ratio(prob_sum, sensitive);
  return report;
}

double delta_metric(const AnonymizedDataset& dataset,
                    const MinedKnowledge& knowledge) {
  return mean_delta(dataset, knowledge.distributions());
}

double query_error(const Table& original, const AnonymizedDataset& dataset,
                   const QuerySpec& spec) {
  const std::size_t q = dataset.schema().qi_attributes().size();
  if (spec.qd < 1 || spec.qd > q) {
    throw std::invalid_argument("query dimensionality out of range");
  }
  if (!(spec.selectivity > 0.0 && spec.selectivity <= 1.0)) {
    throw std::invalid_argument("selectivity must lie in (0, 1]");
  }
  if (spec.count == 0) throw std::invalid_argument("query count must be >= 1");
  const std::size_t n = original.size();
  if (n != dataset.row_count()) {
    throw std::invalid_argument("original table and dataset differ in rows");
  }
  if (original.schema().qi_attributes() != dataset.schema().qi_attributes()) {
    throw std::invalid_argument("original table and dataset differ in QI");
  }
  for (RowId r = 0; r < n; ++r) {
    auto qi = dataset.qi_row(r);
    if (!std::equal(qi.begin(), qi.end(), original.qi_values(r).begin())) {
      throw std::invalid_argument("row " + std::to_string(r) +
                                  " differs between original and dataset");
    }
  }

  const Target& target = dataset.schema().target();
  std::vector<char> truth(n);
  std::vector<double> spread(n);
  for (RowId r = 0; r < n; ++r) {
    truth[r] = target.contains(original.sensitive_value(r)) ? 1 : 0;
    const AGroup& g = dataset.group_of(r);
    spread[r] = static_cast<double>(g.count_in(target)) /
                static_cast<double>(g.size());
  }

  // Per QI attribute: row -> value code, and row count of each value code.
  std::vector<std::vector<std::size_t>> codes(q, std::vector<std::size_t>(n));
  std::vector<std::vector<std::size_t>> value_counts(q);
  for (std::size_t a = 0; a < q; ++a) {
    std::unordered_map<std::string, std::size_t> code_of;
    for (RowId r = 0; r < n; ++r) {
      auto [it, inserted] =
          code_of.try_emplace(dataset.qi_row(r)[a], value_counts[a].size());
      if (inserted) value_counts[a].push_back(0);
      ++value_counts[a][it->second];
      codes[a][r] = it->second;
    }
  }

  const double per_attribute =
      std::pow(spec.selectivity, 1.0 / static_cast<double>(spec.qd));
  rng::Engine eng(spec.seed);
  std::vector<std::size_t> attrs(q);
  double total_error = 0.0;
  std::vector<std::vector<char>> chosen(spec.qd);
  for (std::size_t query = 0; query < spec.count; ++query) {
    std::iota(attrs.begin(), attrs.end(), 0);
    rng::shuffle(attrs, eng);
    for (std::size_t d = 0; d < spec.qd; ++d) {
      const std::size_t a = attrs[d];
      std::vector<std::size_t> order(value_counts[a].size());
      std::iota(order.begin(), order.end(), 0);
      rng::shuffle(order, eng);
      chosen[d].assign(order.size(), 0);
      std::size_t covered = 0;
      for (std::size_t code : order) {
        chosen[d][code] = 1;
        covered += value_counts[a][code];
        if (static_cast<double>(covered) >= per_attribute * static_cast<double>(n)) {
          break;
        }
      }
    }
    double actual = 0.0, estimate = 0.0;
    for (RowId r = 0; r < n; ++r) {
      bool hit = true;
      for (std::size_t d = 0; d < spec.qd && hit; ++d) {
        hit = chosen[d][codes[attrs[d]][r]] != 0;
      }
      if (!hit) continue;
      actual += truth[r];
      estimate += spread[r];
    }
    total_error += std::abs(estimate - actual) / std::max(actual, 1.0);
  }
  return total_error / static_cast<double>(spec.count);
}

}  // namespace fgaudit
