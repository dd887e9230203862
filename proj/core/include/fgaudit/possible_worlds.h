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

// Possible-world inference inside one A-group.
//
// The group's sensitive multiset is collapsed to n_x copies of "x" and N - n_x
// copies of "not x". A world assigns x to exactly n_x members. Its weight is
// the product over members of f (member assigned x) or 1 - f (otherwise),
// where f is the global probability of the member's signature. Conditionals
// are weights normalized over all C(N, n_x) worlds of the group, and a
// member's linkage p(t:x) is the conditional mass of worlds assigning it x.

#ifndef FGAUDIT_POSSIBLE_WORLDS_H_
#define FGAUDIT_POSSIBLE_WORLDS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fgaudit/dataset.h"

namespace fgaudit {

inline constexpr std::uint64_t kDefaultWorldCap = 2'000'000;
// Groups larger than this are weighed in log space.
inline constexpr std::size_t kLogSpaceThreshold = 30;

// Mined probability f = p(s:x) for each signature over one attribute set.
class GlobalDistribution {
 public:
  struct Entry {
    Signature signature;
    double f = 0.0;
    std::size_t support = 0;
  };

  // Every entry must be over `attribute_set` with f in [0, 1] and signatures
  // must be distinct; throws std::invalid_argument otherwise.
  GlobalDistribution(std::vector<std::size_t> attribute_set, Target target,
                     std::vector<Entry> entries);

  const std::vector<std::size_t>& attribute_set() const { return attribute_set_; }
  const Target& target() const { return target_; }
  const std::vector<Entry>& entries() const { return entries_; }

  // Entry whose signature the tuple matches, if retained.
  const Entry* find(std::span<const std::string> tuple_qi) const;
  std::optional<double> lookup(std::span<const std::string> tuple_qi) const;

 private:
  std::vector<std::size_t> attribute_set_;
  Target target_;
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Binomial coefficient C(n, k) as a double (exact below 2^53).
double count_worlds(std::size_t n, std::size_t k);

struct WorldSet {
  std::string group_label;
  std::vector<RowId> members;
  std::size_t n_x = 0;
  // World w assigns x to members at positions
  // x_positions[w * n_x, (w + 1) * n_x), ascending. Worlds are in
  // lexicographic order of those position lists, which is descending order of
  // the member bit-vectors (1 = x): 1100, 1010, 1001, 0110, ...
  std::vector<std::uint32_t> x_positions;
  std::size_t world_count = 0;

  // Filled by weigh_worlds. `weights` may underflow to zero for groups weighed
  // in log space; `log_weights` and `conditionals` stay exact.
  std::vector<double> weights;
  std::vector<double> log_weights;
  std::vector<double> conditionals;
  double total_weight = 0.0;
  // Every world had weight zero; conditionals fell back to uniform.
  bool degenerate = false;

  std::size_t group_size() const { return members.size(); }
  bool weighted() const { return conditionals.size() == world_count; }
  std::span<const std::uint32_t> world(std::size_t w) const {
    return {x_positions.data() + w * n_x, n_x};
  }
  // Member bit-vector of world w.
  std::vector<bool> assignment(std::size_t w) const;
  std::optional<std::size_t> position_of(RowId row) const;
};

// All C(N, n_x) worlds of `group`. Throws WorldExplosionError when the count
// exceeds `cap`, std::invalid_argument when cap is zero.
WorldSet enumerate_worlds(const AGroup& group, const Target& target,
                          std::uint64_t cap = kDefaultWorldCap);

// Sets weights and conditionals in place from per-member probabilities of x.
void reweigh(WorldSet& worlds, std::span<const double> member_x_prob);

// Probability of x for each member of `group`: the f of its retained
// signature, or `fallback_rate` when it matches none.
std::vector<double> member_probabilities(const AnonymizedDataset& dataset,
                                         const AGroup& group,
                                         const GlobalDistribution& g,
                                         double fallback_rate);

WorldSet weigh_worlds(WorldSet worlds, std::span<const double> member_x_prob);
WorldSet weigh_worlds(WorldSet worlds, const AnonymizedDataset& dataset,
                      const GlobalDistribution& g, double fallback_rate);

// p(t:x) for one member. Requires weighted worlds; throws
// std::invalid_argument if the row is not in the group.
double tuple_linkage(const WorldSet& worlds, RowId row);
// p(t:x) for every member, in member order.
std::vector<double> member_linkages(const WorldSet& worlds);
// Same, weighing a shared enumeration without modifying it.
std::vector<double> member_linkages(const WorldSet& worlds,
                                    std::span<const double> member_x_prob,
                                    bool* degenerate = nullptr);

// c_k(s:x) = |L_k(s)| * p(t:x) for any member t matching `signature`. Checks
// that all matching members share one linkage (std::logic_error otherwise);
// throws std::invalid_argument when no member matches.
double expected_count(const AnonymizedDataset& dataset, const AGroup& group,
                      const Signature& signature, const GlobalDistribution& g,
                      double fallback_rate, std::uint64_t cap = kDefaultWorldCap);

}  // namespace fgaudit

#endif  // FGAUDIT_POSSIBLE_WORLDS_H_
