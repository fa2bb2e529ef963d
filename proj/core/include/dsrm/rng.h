// Copyright 2026 The DSRM Authors
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

#ifndef DSRM_RNG_H_
#define DSRM_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace dsrm {

// Seeded random source with platform-independent draws. std::mt19937_64 is
// fully specified by the standard, but the standard distributions and
// std::shuffle are not, so the derived draws are implemented here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of precision.
  double Uniform();

  // Uniform on [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer on [0, n). n must be positive.
  std::uint64_t Below(std::uint64_t n);

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(Below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    Shuffle(std::span<T>(items));
  }

  // Draws min(count, pool.size()) distinct elements uniformly without
  // replacement, in draw order.
  template <typename T>
  std::vector<T> Sample(std::vector<T> pool, std::size_t count) {
    const std::size_t take = count < pool.size() ? count : pool.size();
    for (std::size_t i = 0; i < take; ++i) {
      std::size_t j = i + static_cast<std::size_t>(Below(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(take);
    return pool;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dsrm

#endif  // DSRM_RNG_H_
