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

// Mining global distributions from the published data alone.
//
// For an attribute set with admitted signatures s_1..s_m and a target x, the
// unknowns f_i = p(s_i:x) must reproduce themselves:
//
//   f_i = sum_k c_k(s_i:x) / sum_k |L_k(s_i)|
//
// where the sums run over the groups containing a tuple matching s_i and the
// expected count c_k(s_i:x) = |L_k(s_i)| * p(t:x) is computed from the possible
// worlds of L_k weighted by f itself. That is m nonlinear equations in m
// unknowns; solve() finds a root with damped Newton iteration on a
// forward-difference Jacobian, or plain fixed-point iteration.

#ifndef FGAUDIT_FOREGROUND_MINER_H_
#define FGAUDIT_FOREGROUND_MINER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fgaudit/dataset.h"
#include "fgaudit/possible_worlds.h"
#include "fgaudit/signature_lattice.h"

namespace fgaudit {

enum class SolverMethod { kNewton, kFixedPoint };

SolverMethod parse_solver_method(std::string_view name);
std::string_view solver_method_name(SolverMethod m);

struct SolverConfig {
  SolverMethod method = SolverMethod::kNewton;
  // Convergence when the infinity norm of the residual is at most tol.
  double tol = 1e-8;
  int max_iter = 200;
  double jacobian_step = 1e-6;
  // Step halvings tried before Newton hands over to fixed-point iteration.
  int damping = 20;
  // Iterates are projected into [clamp, 1 - clamp].
  double clamp = 1e-12;
};

class EquationSystem {
 public:
  // Throws std::invalid_argument if `admitted` has no signatures, and
  // WorldExplosionError if some involved group has too many worlds.
  static EquationSystem build(const AnonymizedDataset& dataset,
                              const AdmittedAttributeSet& admitted,
                              const Target& target,
                              std::uint64_t world_cap = kDefaultWorldCap);

  std::size_t size() const { return signatures_.size(); }
  const std::vector<std::size_t>& attribute_set() const { return attribute_set_; }
  const Target& target() const { return target_; }
  const std::vector<SignatureSupport>& signatures() const { return signatures_; }
  // sum_k |L_k(s_i)|, the number of rows matching s_i.
  const std::vector<double>& denominators() const { return denominators_; }
  // Group ids (positions in dataset.groups()) containing a match of s_i.
  const std::vector<std::vector<std::size_t>>& groups_by_signature() const {
    return groups_by_signature_;
  }
  // Probability used for members matching no admitted signature.
  double fallback_rate() const { return fallback_rate_; }

  // Local-proportion estimate: each group contributes its naive x fraction.
  std::vector<double> initial_guess() const;
  // sum_k c_k(s_i:x) for each i at the candidate f.
  std::vector<double> expected_counts(std::span<const double> f) const;
  // Right-hand side: expected_counts / denominators.
  std::vector<double> fixed_point_map(std::span<const double> f) const;
  // r_i(f) = f_i - fixed_point_map(f)_i.
  std::vector<double> residual(std::span<const double> f) const;

 private:
  struct GroupTerm {
    std::size_t group = 0;
    // Index into signatures_ for each member, or -1 when unmatched.
    std::vector<int> member_signature;
    WorldSet worlds;
  };

  std::vector<std::size_t> attribute_set_;
  Target target_;
  std::vector<SignatureSupport> signatures_;
  std::vector<double> denominators_;
  std::vector<std::vector<std::size_t>> groups_by_signature_;
  std::vector<GroupTerm> terms_;
  double fallback_rate_ = 0.0;
};

struct SolverDiagnostics {
  int iterations = 0;
  double residual = 0.0;  // infinity norm at the returned iterate
  bool converged = false;
  SolverMethod method_used = SolverMethod::kNewton;
  // Newton handed over to fixed-point iteration (singular Jacobian or
  // exhausted damping).
  bool fell_back = false;
};

struct Solution {
  std::vector<double> f;
  SolverDiagnostics diagnostics;
};

// Never throws on non-convergence; check diagnostics.converged. `workers` > 1
// evaluates Jacobian columns concurrently.
Solution solve(const EquationSystem& system, const SolverConfig& config,
               int workers = 1);

struct MinedSystem {
  std::vector<std::size_t> attribute_set;
  Target target;
  std::size_t m = 0;
  std::vector<SignatureSupport> signatures;
  // Last iterate of the solver, converged or not.
  std::vector<double> f;
  SolverDiagnostics diagnostics;
  // Present only when the solver converged.
  std::optional<GlobalDistribution> distribution;
  // Set when the system could not be built (e.g. world explosion).
  std::string error;
};

// The collection of mined global distributions together with diagnostics for
// every attempted system.
struct MinedKnowledge {
  std::vector<MinedSystem> systems;
  // Dataset-wide rate of each target; the fallback for unmatched tuples.
  std::vector<std::pair<Target, double>> base_rates;

  std::vector<const GlobalDistribution*> distributions() const;
  double base_rate(const Target& target) const;
};

struct MineOptions {
  std::uint64_t world_cap = kDefaultWorldCap;
  int workers = 1;
};

// Builds and solves one system per (non-pruned attribute set, target).
// Per-system failures are recorded, never thrown.
MinedKnowledge mine_all(const AnonymizedDataset& dataset,
                        const AdmittedSignatures& admitted,
                        std::span<const Target> targets,
                        const SolverConfig& config,
                        const MineOptions& options = {});

}  // namespace fgaudit

#endif  // FGAUDIT_FOREGROUND_MINER_H_
