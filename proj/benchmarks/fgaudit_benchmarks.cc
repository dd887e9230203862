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

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "fgaudit/anonymizer.h"
#include "fgaudit/foreground_miner.h"
#include "fgaudit/possible_worlds.h"
#include "fgaudit/signature_lattice.h"

namespace fgaudit {
namespace {

const Target kX({"x"});

AGroup make_group(std::size_t n, std::size_t n_x) {
  AGroup g;
  g.label = "G";
  for (std::size_t i = 0; i < n; ++i) {
    g.members.push_back(i);
    g.sensitive_values.push_back(i < n_x ? "x" : "y");
  }
  return g;
}

std::vector<double> random_probs(std::size_t n) {
  std::mt19937_64 rng(n);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  std::vector<double> p(n);
  for (double& v : p) v = u(rng);
  return p;
}

// Rows over QI attributes A, B, C; the x rate depends on A and B.
Table synthetic(std::size_t rows, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Row> out;
  for (std::size_t i = 0; i < rows; ++i) {
    const std::size_t a = rng() % 4, b = rng() % 3, c = rng() % 5;
    const double rate = 0.05 + 0.1 * static_cast<double>(a) + 0.05 * static_cast<double>(b);
    std::string x = i == 0 || u(rng) < rate ? "x" : (u(rng) < 0.5 ? "y" : "z");
    out.push_back({"a" + std::to_string(a), "b" + std::to_string(b),
                   "c" + std::to_string(c), std::move(x)});
  }
  return Table(Schema::create({"A", "B", "C", "X"}, {"A", "B", "C"}, "X", kX),
               std::move(out));
}

void BM_EnumerateWorlds(benchmark::State& state) {
  const AGroup g = make_group(static_cast<std::size_t>(state.range(0)),
                              static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) {
    WorldSet ws = enumerate_worlds(g, kX);
    benchmark::DoNotOptimize(ws.x_positions.data());
  }
  state.counters["worlds"] = count_worlds(state.range(0), state.range(1));
}
BENCHMARK(BM_EnumerateWorlds)->Args({8, 4})->Args({16, 8})->Args({23, 8})
    ->Unit(benchmark::kMillisecond);

void BM_MemberLinkages(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const WorldSet ws = enumerate_worlds(make_group(n, static_cast<std::size_t>(state.range(1))), kX);
  const auto p = random_probs(n);
  for (auto _ : state) {
    auto link = member_linkages(ws, p);
    benchmark::DoNotOptimize(link.data());
  }
  state.counters["worlds"] = static_cast<double>(ws.world_count);
}
BENCHMARK(BM_MemberLinkages)->Args({8, 4})->Args({16, 8})->Args({23, 8})->Args({40, 4})
    ->Unit(benchmark::kMillisecond);

void BM_EnumerateAdmitted(benchmark::State& state) {
  const Table raw = synthetic(static_cast<std::size_t>(state.range(0)), 1);
  const AnonymizedDataset ds = anonymize(raw, {2, Strategy::kAnatomy, 1});
  for (auto _ : state) {
    auto admitted = enumerate_admitted(ds, SampleGate::with_min_support(10), 3);
    benchmark::DoNotOptimize(admitted.sets.data());
  }
}
BENCHMARK(BM_EnumerateAdmitted)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
  const Table raw = synthetic(static_cast<std::size_t>(state.range(0)), 2);
  const AnonymizedDataset ds = anonymize(raw, {2, Strategy::kAnatomy, 2});
  const auto admitted = enumerate_admitted(ds, SampleGate::with_min_support(10), 2);
  const std::vector<std::size_t> ab = {0, 1};
  const auto system = EquationSystem::build(ds, *admitted.find(ab), kX);
  SolverConfig config;
  config.method = state.range(1) ? SolverMethod::kNewton : SolverMethod::kFixedPoint;
  config.max_iter = 2000;
  for (auto _ : state) {
    Solution s = solve(system, config);
    benchmark::DoNotOptimize(s.f.data());
    state.counters["iterations"] = s.diagnostics.iterations;
  }
  state.counters["unknowns"] = static_cast<double>(system.size());
}
BENCHMARK(BM_Solve)->Args({2000, 1})->Args({2000, 0})->Args({20000, 1})
    ->Unit(benchmark::kMillisecond);

void BM_MineAll(benchmark::State& state) {
  const Table raw = synthetic(static_cast<std::size_t>(state.range(0)), 3);
  const AnonymizedDataset ds = anonymize(raw, {2, Strategy::kAnatomy, 3});
  const auto admitted = enumerate_admitted(ds, SampleGate::with_min_support(10), 2);
  MineOptions options;
  options.workers = static_cast<int>(state.range(1));
  for (auto _ : state) {
    MinedKnowledge k = mine_all(ds, admitted, std::vector<Target>{kX}, SolverConfig{}, options);
    benchmark::DoNotOptimize(k.systems.data());
  }
}
BENCHMARK(BM_MineAll)->Args({2000, 1})->Args({2000, 4})->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace fgaudit

BENCHMARK_MAIN();
