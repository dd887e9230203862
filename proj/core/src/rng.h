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

// std::uniform_int_distribution and std::shuffle are implementation-defined;
// these helpers keep seeded output identical across standard libraries.

#ifndef FGAUDIT_SRC_RNG_H_
#define FGAUDIT_SRC_RNG_H_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace fgaudit::rng {

using Engine = std::mt19937_64;

// Uniform integer in [0, n), n > 0, by rejection.
inline std::uint64_t below(Engine& eng, std::uint64_t n) {
  const std::uint64_t limit = Engine::max() - Engine::max() % n;
  std::uint64_t v;
  do {
    v = eng();
  } while (v >= limit);
  return v % n;
}

// Uniform double in [0, 1).
inline double unit(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

template <typename T>
void shuffle(std::vector<T>& v, Engine& eng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(below(eng, i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace fgaudit::rng

#endif  // FGAUDIT_SRC_RNG_H_
