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

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace fgaudit {
namespace {

using AttributeSet = std::vector<std::size_t>;

// All k-subsets of {0..n-1} in lexicographic order.
std::vector<AttributeSet> combinations(std::size_t n, std::size_t k) {
  std::vector<AttributeSet> out;
  if (k == 0 || k > n) return out;
  AttributeSet c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = i;
  for (;;) {
    out.push_back(c);
    std::size_t i = k;
    while (i > 0 && c[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++c[i - 1];
    for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
  }
  return out;
}

std::vector<AttributeSet> immediate_subsets(const AttributeSet& s) {
  std::vector<AttributeSet> out;
  for (std::size_t drop = 0; drop < s.size(); ++drop) {
    AttributeSet sub;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i != drop) sub.push_back(s[i]);
    }
    out.push_back(std::move(sub));
  }
  return out;
}

}  // namespace

std::size_t required_sample_size(double epsilon, double sigma) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be positive");
  }
  if (!(sigma > 0.0 && sigma <= 1.0)) {
    throw std::invalid_argument("sigma out of range (0, 1]");
  }
  const double bound = std::log(2.0 / sigma) / (2.0 * epsilon * epsilon);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(bound)));
}

SampleGate SampleGate::from_error_bounds(double epsilon, double sigma) {
  SampleGate g;
  g.min_support_ = required_sample_size(epsilon, sigma);
  g.epsilon_ = epsilon;
  g.sigma_ = sigma;
  return g;
}

SampleGate SampleGate::with_min_support(std::size_t min_support) {
  if (min_support == 0) throw std::invalid_argument("min_support must be >= 1");
  SampleGate g;
  g.min_support_ = min_support;
  return g;
}

const AdmittedAttributeSet* AdmittedSignatures::find(
    std::span<const std::size_t> attributes) const {
  for (const auto& s : sets) {
    if (std::equal(s.attributes.begin(), s.attributes.end(), attributes.begin(),
                   attributes.end())) {
      return &s;
    }
  }
  return nullptr;
}

std::size_t AdmittedSignatures::admitted_set_count() const {
  return static_cast<std::size_t>(std::count_if(
      sets.begin(), sets.end(), [](const auto& s) { return !s.pruned(); }));
}

AdmittedSignatures enumerate_admitted(const AnonymizedDataset& dataset,
                                      const SampleGate& gate,
                                      std::size_t max_set_size) {
  if (max_set_size == 0) throw std::invalid_argument("max_set_size must be >= 1");
  const std::size_t q = dataset.schema().qi_attributes().size();
  const std::size_t min_support = gate.min_support();

  AdmittedSignatures out;
  out.min_support = min_support;
  out.max_set_size = max_set_size;
  std::map<AttributeSet, std::unordered_set<std::string>> admitted_keys;

  for (std::size_t k = 1; k <= std::min(max_set_size, q); ++k) {
    for (AttributeSet attrs : combinations(q, k)) {
      AdmittedAttributeSet entry;
      entry.attributes = attrs;
      std::vector<AttributeSet> parents = k > 1 ? immediate_subsets(attrs)
                                                : std::vector<AttributeSet>{};
      std::vector<const std::unordered_set<std::string>*> parent_keys;
      bool parent_pruned = false;
      for (const auto& p : parents) {
        const auto& keys = admitted_keys.at(p);
        if (keys.empty()) parent_pruned = true;
        parent_keys.push_back(&keys);
      }

      std::unordered_set<std::string>& keys = admitted_keys[attrs];
      if (!parent_pruned) {
        std::vector<std::size_t> counts;
        std::vector<RowId> first_row;
        std::unordered_map<std::string, std::size_t> slot;
        for (RowId r = 0; r < dataset.row_count(); ++r) {
          auto qi = dataset.qi_row(r);
          bool parents_ok = true;
          for (std::size_t i = 0; i < parents.size() && parents_ok; ++i) {
            parents_ok = parent_keys[i]->contains(projection_key(qi, parents[i]));
          }
          if (!parents_ok) continue;
          auto [it, inserted] = slot.try_emplace(projection_key(qi, attrs),
                                                 counts.size());
          if (inserted) {
            counts.push_back(0);
            first_row.push_back(r);
          }
          ++counts[it->second];
        }
        entry.candidates_counted = counts.size();
        for (std::size_t i = 0; i < counts.size(); ++i) {
          if (counts[i] < min_support) continue;
          Signature sig = Signature::project(dataset.qi_row(first_row[i]), attrs);
          keys.insert(sig.key());
          entry.signatures.push_back({std::move(sig), counts[i]});
        }
      }
      out.sets.push_back(std::move(entry));
    }
  }
  return out;
}

}  // namespace fgaudit
