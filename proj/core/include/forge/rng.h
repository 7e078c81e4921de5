// Copyright 2026 The Forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FORGE_RNG_H_
#define FORGE_RNG_H_

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace forge {

// Seeded generator whose derived draws (bounded integers, normals) are
// specified here rather than by the standard library, so sampled datasets
// are identical on every toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform in [0, bound) by rejection; bound must be > 0.
  std::uint64_t UniformBelow(std::uint64_t bound);

  // Uniform in [0, 1) with 53 random bits.
  double UniformUnit();

  // Standard normal via Box-Muller.
  double Normal();

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(UniformBelow(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  // k distinct indices of [0, n), returned in increasing order.
  std::vector<std::size_t> SampleSorted(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Stable 64-bit FNV-1a.
std::uint64_t Fnv1a64(std::string_view bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

// Derives a child seed from a parent seed and a label.
std::uint64_t DeriveSeed(std::uint64_t parent, std::string_view label);

}  // namespace forge

#endif  // FORGE_RNG_H_
