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

// Candidate attribute sets and the signatures with enough support to yield a
// reliable global distribution. Support is anti-monotone (a signature never
// has more matching rows than any of its sub-signatures), so an extension of
// an under-supported signature is never counted.

#ifndef FGAUDIT_SIGNATURE_LATTICE_H_
#define FGAUDIT_SIGNATURE_LATTICE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fgaudit/dataset.h"

namespace fgaudit {

// Smallest sample size |S| with |S| >= ln(2/sigma) / (2 epsilon^2); with that
// many draws the observed fraction is within epsilon of the true one with
// probability at least 1 - sigma. Throws std::invalid_argument unless
// epsilon > 0 and 0 < sigma <= 1.
std::size_t required_sample_size(double epsilon, double sigma);

class SampleGate {
 public:
  static SampleGate from_error_bounds(double epsilon, double sigma);
  // Bypasses the error bounds; min_support must be >= 1.
  static SampleGate with_min_support(std::size_t min_support);

  std::optional<double> epsilon() const { return epsilon_; }
  std::optional<double> sigma() const { return sigma_; }
  std::size_t min_support() const { return min_support_; }

 private:
  SampleGate() = default;
  std::optional<double> epsilon_;
  std::optional<double> sigma_;
  std::size_t min_support_ = 1;
};

struct SignatureSupport {
  Signature signature;
  std::size_t support = 0;
};

struct AdmittedAttributeSet {
  // Positions in Schema::qi_attributes(), strictly increasing.
  std::vector<std::size_t> attributes;
  // Signatures with support >= min_support, in first-seen row order.
  std::vector<SignatureSupport> signatures;
  // Distinct signatures whose support was actually counted.
  std::size_t candidates_counted = 0;

  bool pruned() const { return signatures.empty(); }
};

struct AdmittedSignatures {
  std::size_t min_support = 1;
  std::size_t max_set_size = 0;
  // Every attribute set of size 1..max_set_size, by size and then
  // lexicographically; pruned sets are kept with no signatures.
  std::vector<AdmittedAttributeSet> sets;

  const AdmittedAttributeSet* find(std::span<const std::size_t> attributes) const;
  std::size_t admitted_set_count() const;
};

// Breadth-first walk over attribute-set sizes. A row's projection onto a set
// of size k > 1 is counted only if every sub-signature of size k-1 was
// admitted. Throws std::invalid_argument if max_set_size is zero.
AdmittedSignatures enumerate_admitted(const AnonymizedDataset& dataset,
                                      const SampleGate& gate,
                                      std::size_t max_set_size);

}  // namespace fgaudit

#endif  // FGAUDIT_SIGNATURE_LATTICE_H_
