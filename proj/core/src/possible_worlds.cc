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

#include "fgaudit/possible_worlds.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "fgaudit/errors.h"

namespace fgaudit {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kSymmetryTolerance = 1e-9;

struct Weights {
  std::vector<double> weights;
  std::vector<double> log_weights;
  std::vector<double> conditionals;
  double total = 0.0;
  bool degenerate = false;
};

void weigh_log_space(const WorldSet& ws, std::span<const double> p,
                     Weights& out) {
  const std::size_t n = ws.group_size();
  std::vector<double> log_p(n), log_q(n);
  double all_q = 0.0;  // sum of log(1 - p) over members
  for (std::size_t j = 0; j < n; ++j) {
    log_p[j] = p[j] > 0.0 ? std::log(p[j]) : kNegInf;
    log_q[j] = p[j] < 1.0 ? std::log1p(-p[j]) : kNegInf;
  }
  // Members with p = 1 make all_q -inf; handle by counting them instead.
  std::size_t certain = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (log_q[j] == kNegInf) {
      ++certain;
    } else {
      all_q += log_q[j];
    }
  }
  out.log_weights.assign(ws.world_count, kNegInf);
  double max_lw = kNegInf;
  for (std::size_t w = 0; w < ws.world_count; ++w) {
    double lw = all_q;
    std::size_t covered = 0;
    for (std::uint32_t pos : ws.world(w)) {
      if (log_q[pos] == kNegInf) {
        ++covered;
        lw += log_p[pos];
      } else {
        lw += log_p[pos] - log_q[pos];
      }
    }
    // A member with p = 1 left unassigned contributes a zero factor.
    if (covered < certain) lw = kNegInf;
    out.log_weights[w] = lw;
    max_lw = std::max(max_lw, lw);
  }

  out.weights.resize(ws.world_count);
  out.conditionals.resize(ws.world_count);
  out.total = 0.0;
  for (std::size_t w = 0; w < ws.world_count; ++w) {
    out.weights[w] = std::exp(out.log_weights[w]);
    out.total += out.weights[w];
  }
  if (max_lw == kNegInf) {
    out.degenerate = true;
    std::fill(out.conditionals.begin(), out.conditionals.end(),
              1.0 / static_cast<double>(ws.world_count));
    return;
  }
  double scaled_total = 0.0;
  for (std::size_t w = 0; w < ws.world_count; ++w) {
    out.conditionals[w] = std::exp(out.log_weights[w] - max_lw);
    scaled_total += out.conditionals[w];
  }
  for (double& c : out.conditionals) c /= scaled_total;
}

}  // namespace

WorldExplosionError::WorldExplosionError(std::string group_label,
                                         double world_count, std::uint64_t cap)
    : Error("world explosion in group " + group_label + ": " +
            std::to_string(static_cast<long double>(world_count)) +
            " possible worlds exceed the cap of " + std::to_string(cap)),
      group_label_(std::move(group_label)),
      world_count_(world_count),
      cap_(cap) {}

GlobalDistribution::GlobalDistribution(std::vector<std::size_t> attribute_set,
                                       Target target, std::vector<Entry> entries)
    : attribute_set_(std::move(attribute_set)),
      target_(std::move(target)),
      entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Entry& e = entries_[i];
    if (e.signature.attributes() != attribute_set_) {
      throw std::invalid_argument("signature over a different attribute set");
    }
    if (!(e.f >= 0.0 && e.f <= 1.0)) {
      throw std::invalid_argument("global probability outside [0, 1]");
    }
    if (!index_.emplace(e.signature.key(), i).second) {
      throw std::invalid_argument("duplicate signature in distribution");
    }
  }
}

const GlobalDistribution::Entry* GlobalDistribution::find(
    std::span<const std::string> tuple_qi) const {
  auto it = index_.find(projection_key(tuple_qi, attribute_set_));
  return it == index_.end() ? nullptr : &entries_[it->second];
}

std::optional<double> GlobalDistribution::lookup(
    std::span<const std::string> tuple_qi) const {
  const Entry* e = find(tuple_qi);
  if (!e) return std::nullopt;
  return e->f;
}

double count_worlds(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  std::uint64_t acc = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::uint64_t factor = n - k + i;
    if (acc > std::numeric_limits<std::uint64_t>::max() / factor) {
      return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                                  std::lgamma(n - k + 1.0)));
    }
    acc = acc * factor / i;
  }
  return static_cast<double>(acc);
}

std::vector<bool> WorldSet::assignment(std::size_t w) const {
  std::vector<bool> bits(group_size(), false);
  for (std::uint32_t pos : world(w)) bits[pos] = true;
  return bits;
}

std::optional<std::size_t> WorldSet::position_of(RowId row) const {
  auto it = std::find(members.begin(), members.end(), row);
  if (it == members.end()) return std::nullopt;
  return static_cast<std::size_t>(it - members.begin());
}

WorldSet enumerate_worlds(const AGroup& group, const Target& target,
                          std::uint64_t cap) {
  if (cap == 0) throw std::invalid_argument("world cap must be at least 1");
  WorldSet ws;
  ws.group_label = group.label;
  ws.members = group.members;
  const std::size_t n = group.size();
  const std::size_t k = group.count_in(target);
  ws.n_x = k;
  const double count = count_worlds(n, k);
  if (count > static_cast<double>(cap)) {
    throw WorldExplosionError(group.label, count, cap);
  }
  ws.world_count = static_cast<std::size_t>(count);
  ws.x_positions.reserve(ws.world_count * k);

  std::vector<std::uint32_t> comb(k);
  std::iota(comb.begin(), comb.end(), 0u);
  for (std::size_t w = 0; w < ws.world_count; ++w) {
    ws.x_positions.insert(ws.x_positions.end(), comb.begin(), comb.end());
    // Advance to the next combination in lexicographic order.
    std::size_t i = k;
    while (i > 0 && comb[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++comb[i - 1];
    for (std::size_t j = i; j < k; ++j) comb[j] = comb[j - 1] + 1;
  }
  return ws;
}

namespace {

Weights compute_weights(const WorldSet& ws, std::span<const double> p) {
  const std::size_t n = ws.group_size();
  if (p.size() != n) {
    throw std::invalid_argument("one probability per group member required");
  }
  Weights out;
  if (n > kLogSpaceThreshold) {
    weigh_log_space(ws, p, out);
    return out;
  }

  out.weights.resize(ws.world_count);
  std::vector<char> is_x(n);
  double total = 0.0;
  for (std::size_t w = 0; w < ws.world_count; ++w) {
    std::fill(is_x.begin(), is_x.end(), 0);
    for (std::uint32_t pos : ws.world(w)) is_x[pos] = 1;
    double weight = 1.0;
    for (std::size_t j = 0; j < n; ++j) weight *= is_x[j] ? p[j] : 1.0 - p[j];
    out.weights[w] = weight;
    total += weight;
  }
  if (total > 0.0 && std::isfinite(total)) {
    out.total = total;
    out.conditionals.resize(ws.world_count);
    out.log_weights.resize(ws.world_count);
    for (std::size_t w = 0; w < ws.world_count; ++w) {
      out.conditionals[w] = out.weights[w] / total;
      out.log_weights[w] =
          out.weights[w] > 0.0 ? std::log(out.weights[w]) : kNegInf;
    }
    return out;
  }
  // Either every world carries a zero factor or the products underflowed;
  // log space tells the two apart.
  weigh_log_space(ws, p, out);
  return out;
}

std::vector<double> accumulate_linkages(const WorldSet& ws,
                                        const std::vector<double>& cond) {
  std::vector<double> acc(ws.group_size(), 0.0);
  for (std::size_t w = 0; w < ws.world_count; ++w) {
    const double c = cond[w];
    for (std::uint32_t pos : ws.world(w)) acc[pos] += c;
  }
  // Rounding may push a sum of conditionals a hair past 1.
  for (double& a : acc) a = std::min(a, 1.0);
  return acc;
}

}  // namespace

void reweigh(WorldSet& ws, std::span<const double> p) {
  Weights w = compute_weights(ws, p);
  ws.weights = std::move(w.weights);
  ws.log_weights = std::move(w.log_weights);
  ws.conditionals = std::move(w.conditionals);
  ws.total_weight = w.total;
  ws.degenerate = w.degenerate;
}

std::vector<double> member_linkages(const WorldSet& ws,
                                    std::span<const double> member_x_prob,
                                    bool* degenerate) {
  Weights w = compute_weights(ws, member_x_prob);
  if (degenerate) *degenerate = w.degenerate;
  return accumulate_linkages(ws, w.conditionals);
}

std::vector<double> member_probabilities(const AnonymizedDataset& dataset,
                                         const AGroup& group,
                                         const GlobalDistribution& g,
                                         double fallback_rate) {
  std::vector<double> out;
  out.reserve(group.size());
  for (RowId r : group.members) {
    out.push_back(g.lookup(dataset.qi_row(r)).value_or(fallback_rate));
  }
  return out;
}

WorldSet weigh_worlds(WorldSet worlds, std::span<const double> member_x_prob) {
  reweigh(worlds, member_x_prob);
  return worlds;
}

WorldSet weigh_worlds(WorldSet worlds, const AnonymizedDataset& dataset,
                      const GlobalDistribution& g, double fallback_rate) {
  const AGroup& group = dataset.group_of(worlds.members.at(0));
  auto p = member_probabilities(dataset, group, g, fallback_rate);
  reweigh(worlds, p);
  return worlds;
}

std::vector<double> member_linkages(const WorldSet& ws) {
  if (!ws.weighted()) throw std::invalid_argument("worlds are not weighted");
  return accumulate_linkages(ws, ws.conditionals);
}

double tuple_linkage(const WorldSet& ws, RowId row) {
  if (!ws.weighted()) throw std::invalid_argument("worlds are not weighted");
  auto pos = ws.position_of(row);
  if (!pos) {
    throw std::invalid_argument("row " + std::to_string(row) +
                                " is not in group " + ws.group_label);
  }
  double sum = 0.0;
  for (std::size_t w = 0; w < ws.world_count; ++w) {
    auto x = ws.world(w);
    if (std::find(x.begin(), x.end(), *pos) != x.end()) sum += ws.conditionals[w];
  }
  return sum;
}

double expected_count(const AnonymizedDataset& dataset, const AGroup& group,
                      const Signature& signature, const GlobalDistribution& g,
                      double fallback_rate, std::uint64_t cap) {
  std::vector<std::size_t> matching;
  for (std::size_t j = 0; j < group.size(); ++j) {
    if (match(dataset.qi_row(group.members[j]), signature)) matching.push_back(j);
  }
  if (matching.empty()) {
    throw std::invalid_argument("no member of group " + group.label +
                                " matches " + signature.to_string(dataset.schema()));
  }
  WorldSet ws = enumerate_worlds(group, g.target(), cap);
  reweigh(ws, member_probabilities(dataset, group, g, fallback_rate));
  std::vector<double> link = member_linkages(ws);
  const double first = link[matching.front()];
  for (std::size_t j : matching) {
    if (std::abs(link[j] - first) > kSymmetryTolerance) {
      throw std::logic_error("members of group " + group.label +
                             " matching one signature have unequal linkage");
    }
  }
  return static_cast<double>(matching.size()) * first;
}

}  // namespace fgaudit
