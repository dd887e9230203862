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

#include "fgaudit/foreground_miner.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "fgaudit/errors.h"
#include "parallel.h"

namespace fgaudit {
namespace {

constexpr double kSymmetryTolerance = 1e-9;

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) return std::numeric_limits<double>::infinity();
    m = std::max(m, std::abs(x));
  }
  return m;
}

class Clamp {
 public:
  explicit Clamp(double margin) : lo_(margin), hi_(1.0 - margin) {}
  double operator()(double v) const { return std::clamp(v, lo_, hi_); }
  void apply(std::vector<double>& v) const {
    for (double& x : v) x = (*this)(x);
  }
  double hi() const { return hi_; }

 private:
  double lo_;
  double hi_;
};

// Runs f <- clamp(F(f)) until the residual norm drops to tol or `budget`
// updates are spent.
void iterate_fixed_point(const EquationSystem& system, const Clamp& clamp,
                         double tol, int budget, std::vector<double>& f,
                         std::vector<double>& r, SolverDiagnostics& diag) {
  double norm = inf_norm(r);
  for (int i = 0; i < budget && norm > tol; ++i) {
    f = system.fixed_point_map(f);
    clamp.apply(f);
    r = system.residual(f);
    norm = inf_norm(r);
    ++diag.iterations;
  }
  diag.residual = norm;
  diag.converged = norm <= tol;
}

}  // namespace

SolverMethod parse_solver_method(std::string_view name) {
  if (name == "newton") return SolverMethod::kNewton;
  if (name == "fixed_point" || name == "fixed-point") {
    return SolverMethod::kFixedPoint;
  }
  throw std::invalid_argument("unknown solver method '" + std::string(name) + "'");
}

std::string_view solver_method_name(SolverMethod m) {
  return m == SolverMethod::kNewton ? "newton" : "fixed_point";
}

EquationSystem EquationSystem::build(const AnonymizedDataset& dataset,
                                     const AdmittedAttributeSet& admitted,
                                     const Target& target,
                                     std::uint64_t world_cap) {
  if (admitted.signatures.empty()) {
    throw std::invalid_argument("attribute set has no admitted signatures");
  }
  EquationSystem sys;
  sys.attribute_set_ = admitted.attributes;
  sys.target_ = target;
  sys.signatures_ = admitted.signatures;
  sys.fallback_rate_ = dataset.base_rate(target);

  const std::size_t m = sys.signatures_.size();
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < m; ++i) {
    index.emplace(sys.signatures_[i].signature.key(), static_cast<int>(i));
  }
  sys.denominators_.assign(m, 0.0);
  sys.groups_by_signature_.resize(m);

  for (const AGroup& group : dataset.groups()) {
    GroupTerm term;
    term.group = group.gid;
    bool any = false;
    for (RowId r : group.members) {
      auto it = index.find(projection_key(dataset.qi_row(r), sys.attribute_set_));
      const int sig = it == index.end() ? -1 : it->second;
      term.member_signature.push_back(sig);
      if (sig < 0) continue;
      any = true;
      sys.denominators_[sig] += 1.0;
      auto& groups = sys.groups_by_signature_[sig];
      if (groups.empty() || groups.back() != group.gid) groups.push_back(group.gid);
    }
    if (!any) continue;
    term.worlds = enumerate_worlds(group, target, world_cap);
    sys.terms_.push_back(std::move(term));
  }
  return sys;
}

std::vector<double> EquationSystem::initial_guess() const {
  std::vector<double> num(size(), 0.0);
  for (const GroupTerm& t : terms_) {
    const double local = static_cast<double>(t.worlds.n_x) /
                         static_cast<double>(t.worlds.group_size());
    for (int sig : t.member_signature) {
      if (sig >= 0) num[sig] += local;
    }
  }
  for (std::size_t i = 0; i < size(); ++i) num[i] /= denominators_[i];
  return num;
}

std::vector<double> EquationSystem::expected_counts(std::span<const double> f) const {
  if (f.size() != size()) {
    throw std::invalid_argument("candidate vector has the wrong dimension");
  }
  std::vector<double> counts(size(), 0.0);
  std::vector<double> p;
  // First linkage seen per signature within the current group.
  std::vector<double> seen(size());
  std::vector<char> has_seen(size());
  for (const GroupTerm& t : terms_) {
    p.clear();
    for (int sig : t.member_signature) {
      p.push_back(sig >= 0 ? f[sig] : fallback_rate_);
    }
    std::vector<double> link = member_linkages(t.worlds, p);
    std::fill(has_seen.begin(), has_seen.end(), 0);
    for (std::size_t j = 0; j < link.size(); ++j) {
      const int sig = t.member_signature[j];
      if (sig < 0) continue;
      if (!has_seen[sig]) {
        has_seen[sig] = 1;
        seen[sig] = link[j];
      } else if (std::abs(link[j] - seen[sig]) > kSymmetryTolerance) {
        throw std::logic_error("members of group " + t.worlds.group_label +
                               " matching one signature have unequal linkage");
      }
      counts[sig] += link[j];
    }
  }
  return counts;
}

std::vector<double> EquationSystem::fixed_point_map(std::span<const double> f) const {
  std::vector<double> c = expected_counts(f);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] /= denominators_[i];
  return c;
}

std::vector<double> EquationSystem::residual(std::span<const double> f) const {
  std::vector<double> r = fixed_point_map(f);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = f[i] - r[i];
  return r;
}

Solution solve(const EquationSystem& system, const SolverConfig& config,
               int workers) {
  if (system.size() == 0) throw std::invalid_argument("empty equation system");
  if (!(config.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (config.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (!(config.clamp >= 0.0 && config.clamp < 0.5)) {
    throw std::invalid_argument("clamp must lie in [0, 0.5)");
  }

  const Clamp clamp(config.clamp);
  const std::size_t m = system.size();
  Solution sol;
  SolverDiagnostics& diag = sol.diagnostics;
  std::vector<double>& f = sol.f;
  f = system.initial_guess();
  clamp.apply(f);
  std::vector<double> r = system.residual(f);
  double norm = inf_norm(r);

  if (config.method == SolverMethod::kFixedPoint) {
    diag.method_used = SolverMethod::kFixedPoint;
    iterate_fixed_point(system, clamp, config.tol, config.max_iter, f, r, diag);
    return sol;
  }

  bool fall_back = false;
  Eigen::MatrixXd jac(m, m);
  while (norm > config.tol && diag.iterations < config.max_iter) {
    internal::parallel_for(m, workers, [&](std::size_t j) {
      std::vector<double> probe = f;
      double h = config.jacobian_step;
      if (probe[j] + h > clamp.hi()) h = -h;
      probe[j] += h;
      std::vector<double> rj = system.residual(probe);
      for (std::size_t i = 0; i < m; ++i) jac(i, j) = (rj[i] - r[i]) / h;
    });
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
    if (!lu.isInvertible()) {
      fall_back = true;
      break;
    }
    Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(r.data(), m);
    Eigen::VectorXd step = lu.solve(rhs);
    if (!step.allFinite()) {
      fall_back = true;
      break;
    }

    bool accepted = false;
    double scale = 1.0;
    std::vector<double> candidate(m);
    std::vector<double> rc;
    for (int t = 0; t <= config.damping; ++t, scale *= 0.5) {
      for (std::size_t i = 0; i < m; ++i) candidate[i] = clamp(f[i] + scale * step[i]);
      rc = system.residual(candidate);
      const double nc = inf_norm(rc);
      if (nc < norm) {
        f = candidate;
        r = std::move(rc);
        norm = nc;
        accepted = true;
        break;
      }
    }
    ++diag.iterations;
    if (!accepted) {
      fall_back = true;
      break;
    }
  }

  diag.residual = norm;
  diag.converged = norm <= config.tol;
  if (fall_back && !diag.converged) {
    diag.fell_back = true;
    diag.method_used = SolverMethod::kFixedPoint;
    iterate_fixed_point(system, clamp, config.tol,
                        config.max_iter - diag.iterations, f, r, diag);
  }
  return sol;
}

std::vector<const GlobalDistribution*> MinedKnowledge::distributions() const {
  std::vector<const GlobalDistribution*> out;
  for (const auto& s : systems) {
    if (s.distribution) out.push_back(&*s.distribution);
  }
  return out;
}

double MinedKnowledge::base_rate(const Target& target) const {
  for (const auto& [t, rate] : base_rates) {
    if (t == target) return rate;
  }
  throw std::invalid_argument("no base rate recorded for target " + target.label());
}

MinedKnowledge mine_all(const AnonymizedDataset& dataset,
                        const AdmittedSignatures& admitted,
                        std::span<const Target> targets,
                        const SolverConfig& config, const MineOptions& options) {
  MinedKnowledge out;
  for (const Target& t : targets) out.base_rates.emplace_back(t, dataset.base_rate(t));

  struct Job {
    const AdmittedAttributeSet* set;
    const Target* target;
  };
  std::vector<Job> jobs;
  for (const auto& set : admitted.sets) {
    if (set.pruned()) continue;
    for (const Target& t : targets) jobs.push_back({&set, &t});
  }
  out.systems.resize(jobs.size());

  internal::parallel_for(jobs.size(), options.workers, [&](std::size_t i) {
    const Job& job = jobs[i];
    MinedSystem& ms = out.systems[i];
    ms.attribute_set = job.set->attributes;
    ms.target = *job.target;
    ms.m = job.set->signatures.size();
    ms.signatures = job.set->signatures;
    try {
      EquationSystem sys =
          EquationSystem::build(dataset, *job.set, *job.target, options.world_cap);
      Solution sol = solve(sys, config);
      ms.diagnostics = sol.diagnostics;
      ms.f = sol.f;
      if (!sol.diagnostics.converged) return;
      std::vector<GlobalDistribution::Entry> entries;
      entries.reserve(ms.m);
      for (std::size_t k = 0; k < ms.m; ++k) {
        entries.push_back({sys.signatures()[k].signature, sol.f[k],
                           sys.signatures()[k].support});
      }
      ms.distribution.emplace(ms.attribute_set, ms.target, std::move(entries));
    } catch (const Error& e) {
      ms.error = e.what();
    }
  });
  return out;
}

}  // namespace fgaudit
